mod common;

use std::io::Write;
use std::sync::Arc;

use common::*;
use passpoints_study::{read_events, EventPayload, Study, StudyState, VirtualClock};

fn open(path: &std::path::Path, clock: &VirtualClock, snapshot_every: u64) -> Study {
    let mut cfg = config();
    cfg.snapshot_every = snapshot_every;
    Study::open(cfg, Arc::new(clock.clone()), path).unwrap()
}

#[test]
fn replay_is_a_pure_fold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let study = open(&path, &clock, 0);
    simulate(&study, &clock, 80, 1, 0);
    let live = study.state();

    let events = read_events(&path).unwrap();
    assert_eq!(events.len() as u64, live.last_seq);
    let rules = config().rules();
    let a = StudyState::replay(rules, &events).unwrap();
    let b = StudyState::replay(rules, &events).unwrap();
    assert_eq!(a, live);
    assert_eq!(a, b);

    // applying the log again is a no-op
    let mut again = a.clone();
    for ev in &events {
        assert!(!again.apply(ev).unwrap());
    }
    assert_eq!(again, a);

    // replaying any prefix, then the full log, lands on the same state
    let mut partial = StudyState::replay(rules, &events[..events.len() / 2]).unwrap();
    for ev in &events {
        partial.apply(ev).unwrap();
    }
    assert_eq!(partial, a);
}

#[test]
fn log_is_ordered_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let study = open(&path, &clock, 0);
    simulate(&study, &clock, 30, 2, 0);
    // a clock stepping backwards must not produce a decreasing log
    clock.set(T0);
    study.enroll("late", false).unwrap();
    let events = read_events(&path).unwrap();
    for (i, w) in events.windows(2).enumerate() {
        assert_eq!(w[1].seq, w[0].seq + 1, "event {i}");
        assert!(w[1].timestamp >= w[0].timestamp, "event {i}");
    }
    assert!(matches!(events.last().unwrap().payload, EventPayload::Enrolled { .. }));
}

#[test]
fn enrollment_is_logged_before_reply() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let study = open(&path, &clock, 0);
    let a = study.enroll("alice", false).unwrap();
    let events = read_events(&path).unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0].user_id, "alice");
    assert_eq!(events[0].payload, EventPayload::Enrolled { group: a.group, image_id: a.image_id });
}

#[test]
fn reopen_with_and_without_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let live = {
        let study = open(&path, &clock, 7);
        simulate(&study, &clock, 40, 3, 0);
        study.state()
    };
    let snap = dir.path().join("events.jsonl.snapshot");
    assert!(snap.exists());

    assert_eq!(open(&path, &clock, 7).state(), live);
    std::fs::write(&snap, b"{not json").unwrap();
    assert_eq!(open(&path, &clock, 7).state(), live);
    std::fs::remove_file(&snap).unwrap();
    assert_eq!(open(&path, &clock, 7).state(), live);
}

#[test]
fn restart_continues_the_assignment_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let mut groups = Vec::new();
    for half in 0..2 {
        let study = open(&path, &clock, 5);
        for i in 0..30 {
            groups.push(study.enroll(&format!("u{half}_{i}"), false).unwrap().group);
        }
    }
    let (single, _) = study();
    let expected: Vec<_> = (0..60).map(|i| single.enroll(&format!("x{i}"), false).unwrap().group).collect();
    assert_eq!(groups, expected);
}

#[test]
fn torn_final_line_is_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    let before = {
        let study = open(&path, &clock, 0);
        simulate(&study, &clock, 5, 4, 0);
        study.state()
    };
    let mut f = std::fs::OpenOptions::new().append(true).open(&path).unwrap();
    f.write_all(br#"{"seq":99999,"timestamp":1,"user_id":"x","kind":"enro"#).unwrap();
    drop(f);

    let study = open(&path, &clock, 0);
    assert_eq!(study.state(), before);
    study.enroll("after", false).unwrap();
    let events = read_events(&path).unwrap();
    assert_eq!(events.last().unwrap().seq, before.last_seq + 1);
}

#[test]
fn corrupt_middle_line_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.jsonl");
    let clock = VirtualClock::new(T0);
    {
        let study = open(&path, &clock, 0);
        simulate(&study, &clock, 3, 5, 0);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[2] = "garbage";
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let err = Study::open(config(), Arc::new(clock), &path).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}
