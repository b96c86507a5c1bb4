mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use passpoints_core::ClickPoint;
use passpoints_study::{Group, Stage, Study, StudyError, VirtualClock};

#[test]
fn enrollment_is_balanced_over_three_groups() {
    let (study, _) = study();
    let mut counts: BTreeMap<Group, u32> = BTreeMap::new();
    for i in 0..3000 {
        *counts.entry(study.enroll(&format!("u{i}"), false).unwrap().group).or_default() += 1;
    }
    assert_eq!(counts.len(), 3);
    for (g, n) in counts {
        assert!((900..=1100).contains(&n), "{g:?}: {n}");
    }
}

#[test]
fn seeded_assignment_repeats() {
    let groups = |seed: u64| -> Vec<Group> {
        let mut cfg = config();
        cfg.seed = seed;
        let study = Study::in_memory(cfg, Arc::new(VirtualClock::new(T0))).unwrap();
        (0..60).map(|i| study.enroll(&format!("p{i}"), false).unwrap().group).collect()
    };
    assert_eq!(groups(7), groups(7));
    assert_ne!(groups(7), groups(8));
}

#[test]
fn duplicate_and_mobile_enrollment_rejected() {
    let (study, _) = study();
    let first = study.enroll("alice", false).unwrap();
    assert!(matches!(study.enroll("alice", false), Err(StudyError::DuplicateEnrollment)));
    assert_eq!(study.assignment("alice").unwrap(), first);
    let err = study.enroll("phone", true).unwrap_err();
    assert_eq!(err.code(), "mobile_client");
    assert!(matches!(study.assignment("phone"), Err(StudyError::UnknownUser)));
}

#[test]
fn reveal_follows_group() {
    let (study, _) = study();
    for i in 0..30 {
        let a = study.enroll(&format!("u{i}"), false).unwrap();
        assert_eq!(a.reveal.direction, a.group.reveal());
        assert_eq!(a.reveal.duration_secs, 20.0);
        assert_eq!(a.session.step, Stage::Practice);
    }
}

#[test]
fn session_one_steps_are_enforced() {
    let (study, _) = study();
    study.enroll("u", false).unwrap();
    let pw = password();
    assert!(matches!(study.create_password("u", &pw), Err(StudyError::WrongStep { .. })));
    study.practice_complete("u").unwrap();
    assert!(matches!(study.login("u", &pw, None), Err(StudyError::WrongStep { .. })));
    assert!(matches!(study.create_password("u", &pw[..4]), Err(StudyError::Invalid(_))));
    let mut outside = pw.clone();
    outside[2] = ClickPoint { x: 640, y: 10 };
    assert!(matches!(study.create_password("u", &outside), Err(StudyError::Invalid(_))));
    assert_eq!(study.create_password("u", &pw).unwrap().next_step, Stage::Questionnaire);
    // the questionnaire comes before the confirmation login
    assert!(matches!(study.login("u", &pw, None), Err(StudyError::WrongStep { .. })));
    let g = study.assignment("u").unwrap().group;
    study.submit_questionnaire("u", session1(g, true, false)).unwrap();
    let out = study.login("u", &pw, Some(1)).unwrap();
    assert!(out.success && out.session_completed);
    assert_eq!(out.next_step, Stage::Session2);
}

#[test]
fn tolerance_boundary_and_attempt_counts() {
    let (study, clock) = study();
    let pw = password();
    run_session1(&study, &clock, "u", &pw, 1000);
    clock.advance_ms(DAY_MS);

    let mut off = pw.clone();
    off[3].x += 11;
    let mut edge = pw.clone();
    for p in &mut edge {
        p.x += 10;
        p.y -= 10;
    }
    // malformed attempts are errors, not failed logins
    assert!(matches!(study.login("u", &pw[..4], None), Err(StudyError::Invalid(_))));
    for _ in 0..3 {
        let out = study.login("u", &off, Some(2)).unwrap();
        assert!(!out.success && !out.session_completed);
    }
    let out = study.login("u", &edge, Some(2)).unwrap();
    assert!(out.success && out.session_completed);
    assert_eq!(out.unsuccessful_attempts, 3);
    let rec = &study.state().participants["u"].sessions[1];
    assert_eq!((rec.unsuccessful_attempts, rec.successful_logins), (3, 1));
}

#[test]
fn session_gates_follow_completion_times() {
    let (study, clock) = study();
    let pw = password();
    run_session1(&study, &clock, "u", &pw, 500);
    let done1 = study.now();
    let a = study.assignment("u").unwrap();
    assert_eq!(a.session.opens_at, Some(done1 + DAY_MS));
    assert!(!a.session.open);

    clock.set(done1 + DAY_MS - 1);
    match study.login("u", &pw, Some(2)) {
        Err(StudyError::SessionNotOpen { session: 2, opens_at }) => assert_eq!(opens_at, Some(done1 + DAY_MS)),
        other => panic!("{other:?}"),
    }
    assert!(study.image_displayed("u").is_err());
    clock.set(done1 + DAY_MS);
    let out = study.login("u", &pw, Some(2)).unwrap();
    assert!(out.success);
    let done2 = study.now();
    assert_eq!(out.next_session_opens_at, Some(done2 + 5 * DAY_MS));

    clock.set(done2 + 5 * DAY_MS - 1);
    assert!(matches!(study.login("u", &pw, Some(3)), Err(StudyError::SessionNotOpen { session: 3, .. })));
    clock.set(done2 + 5 * DAY_MS);
    assert!(study.login("u", &pw, Some(3)).unwrap().success);
    // one success ends session-3 logins
    assert!(study.login("u", &pw, Some(3)).is_err());
}

#[test]
fn session2_reset_rolls_back_and_delays() {
    let (study, clock) = study();
    let pw = password();
    let group = run_session1(&study, &clock, "u", &pw, 500);
    let before = study.state().participants["u"].clone();

    clock.advance_ms(DAY_MS + 3 * passpoints_study::HOUR_MS);
    let wrong = pts(&[(10, 10), (20, 20), (30, 30), (40, 40), (50, 50)]);
    assert!(!study.login("u", &wrong, Some(2)).unwrap().success);
    let reset_at = study.now();
    let out = study.reset("u", Some(2)).unwrap();
    assert_eq!(out.next_step, Stage::Create);
    assert_eq!(out.resets, 1);
    assert_eq!(out.session2_not_before, Some(reset_at + DAY_MS));

    let a = study.assignment("u").unwrap();
    assert_eq!((a.group, a.image_id.clone()), (group, before.image_id.clone()));
    assert_eq!(a.session.number, 1);

    let new_pw = pts(&[(100, 100), (150, 120), (200, 140), (250, 160), (300, 180)]);
    clock.advance_ms(2000);
    study.create_password("u", &new_pw).unwrap();
    // questionnaire already answered, straight to the confirmation login
    assert_eq!(study.assignment("u").unwrap().session.step, Stage::ConfirmLogin);
    assert!(!study.login("u", &pw, Some(1)).unwrap().success);
    let out = study.login("u", &new_pw, Some(1)).unwrap();
    let opens = out.next_session_opens_at.unwrap();
    assert!(opens >= reset_at + DAY_MS);
    assert!(opens >= study.now() + DAY_MS);

    clock.set(opens - 1);
    assert!(matches!(study.login("u", &new_pw, Some(2)), Err(StudyError::SessionNotOpen { .. })));
    clock.set(opens);
    assert!(study.login("u", &new_pw, Some(2)).unwrap().success);

    let after = &study.state().participants["u"];
    assert_eq!((after.group, &after.image_id), (before.group, &before.image_id));
    assert_eq!(after.password.as_deref(), Some(&new_pw[..]));
    assert_eq!(after.reset_sessions, vec![2]);
}

#[test]
fn session1_reset_recreates_immediately() {
    let (study, _) = study();
    study.enroll("u", false).unwrap();
    study.practice_complete("u").unwrap();
    assert!(matches!(study.reset("u", None), Err(StudyError::WrongStep { .. })));
    study.create_password("u", &password()).unwrap();
    let g = study.assignment("u").unwrap().group;
    study.submit_questionnaire("u", session1(g, true, false)).unwrap();
    let out = study.reset("u", Some(1)).unwrap();
    assert_eq!(out.next_step, Stage::Create);
    assert_eq!(out.session2_not_before, None);
    assert!(matches!(study.reset("u", Some(2)), Err(StudyError::WrongSession { requested: 2, current: 1 })));
}

#[test]
fn session3_reset_rejected_and_exit_survey_still_offered() {
    let (study, clock) = study();
    let pw = password();
    let group = run_session1(&study, &clock, "u", &pw, 500);
    clock.advance_ms(DAY_MS);
    study.login("u", &pw, None).unwrap();
    clock.advance_ms(5 * DAY_MS);

    let before = study.state();
    assert!(matches!(study.reset("u", Some(3)), Err(StudyError::ResetNotAllowed)));
    assert_eq!(study.state(), before);

    // exit survey needs at least one attempt
    assert!(study.submit_sus("u", &[3; 10]).is_err());
    let wrong = pts(&[(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]);
    let out = study.login("u", &wrong, Some(3)).unwrap();
    assert!(!out.success && out.exit_survey_available);
    assert!(matches!(study.reset("u", None), Err(StudyError::ResetNotAllowed)));

    study.submit_questionnaire("u", exit(group)).unwrap();
    let out = study.submit_sus("u", &[5, 1, 5, 1, 5, 1, 5, 1, 5, 1]).unwrap();
    assert_eq!(out.score, 100.0);
    assert_eq!(out.next_step, Stage::Finished);
    assert!(matches!(study.submit_sus("u", &[3; 10]), Err(StudyError::AlreadySubmitted(_))));
    assert!(study.login("u", &pw, Some(3)).is_err());
    let p = &study.state().participants["u"];
    assert!(p.sessions[2].completed_at.is_some());
    assert_eq!(p.sessions[2].login_time_ms, None);
}

#[test]
fn login_and_creation_times_come_from_display_signal() {
    let (study, clock) = study();
    let pw = password();
    run_session1(&study, &clock, "u", &pw, 4321);
    let p = &study.state().participants["u"];
    assert_eq!(p.creation_duration_ms, Some(4321));
    assert_eq!(p.sessions[0].login_time_ms, Some(4321));

    clock.advance_ms(DAY_MS);
    study.image_displayed("u").unwrap();
    clock.advance_ms(700);
    study.login("u", &pts(&[(0, 0); 5]), None).unwrap();
    clock.advance_ms(800);
    study.login("u", &pw, None).unwrap();
    // measured from the image display, across the failed attempt
    assert_eq!(study.state().participants["u"].sessions[1].login_time_ms, Some(1500));
}

#[test]
fn questionnaire_schema_rules() {
    let (study, _) = study();
    let mut by_group = BTreeMap::new();
    for i in 0..12 {
        let a = study.enroll(&format!("u{i}"), false).unwrap();
        by_group.entry(a.group).or_insert(a.user_id);
    }
    for (group, user) in &by_group {
        study.practice_complete(user).unwrap();
        study.create_password(user, &password()).unwrap();
        let other = if group.is_primed() { Group::Control } else { Group::Ltr };
        assert!(matches!(study.submit_questionnaire(user, session1(other, true, false)), Err(StudyError::Schema(_))));
        assert!(matches!(study.submit_questionnaire(user, exit(*group)), Err(StudyError::WrongStep { .. })));
        study.submit_questionnaire(user, session1(*group, true, false)).unwrap();
        assert!(matches!(
            study.submit_questionnaire(user, session1(*group, true, false)),
            Err(StudyError::AlreadySubmitted(_))
        ));
    }
}

#[test]
fn qualification_filters_only_primed_reveal_answers() {
    let (study, _) = study();
    let mut expected = BTreeMap::new();
    for i in 0..40 {
        let user = format!("u{i}");
        let group = study.enroll(&user, false).unwrap().group;
        study.practice_complete(&user).unwrap();
        // every password is five copies of one point; such users stay in
        let p = ClickPoint { x: 50 + i, y: 60 };
        study.create_password(&user, &[p; 5]).unwrap();
        let (watched, distracted) = [(true, false), (true, true), (false, false)][i as usize % 3];
        study.submit_questionnaire(&user, session1(group, watched, distracted)).unwrap();
        expected.insert(user, !group.is_primed() || (watched && !distracted));
    }
    let state = study.state();
    for (user, q) in &expected {
        assert_eq!(state.participants[user].qualified(), *q, "{user}");
    }
    assert!(expected.values().any(|q| !q));
    assert!(expected.iter().any(|(u, q)| *q && state.participants[u].group.is_primed()));
}
