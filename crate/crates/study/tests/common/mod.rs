#![allow(dead_code)]

use std::sync::Arc;

use passpoints_core::ClickPoint;
use passpoints_study::{
    Demographics, ExitAnswers, Group, Questionnaire, Session1Answers, Strategy, Study, StudyConfig,
    VirtualClock,
};

pub use passpoints_study::HOUR_MS;

pub const T0: i64 = 1_700_000_000_000;
pub const DAY_MS: i64 = 24 * HOUR_MS;

pub fn pts(raw: &[(u32, u32)]) -> Vec<ClickPoint> {
    raw.iter().map(|&(x, y)| ClickPoint { x, y }).collect()
}

pub fn password() -> Vec<ClickPoint> {
    pts(&[(613, 457), (523, 389), (277, 131), (409, 211), (197, 149)])
}

pub fn config() -> StudyConfig {
    StudyConfig {
        fsync: false,
        admin_token: Some("secret".into()),
        ..StudyConfig::default()
    }
}

pub fn study() -> (Study, VirtualClock) {
    let clock = VirtualClock::new(T0);
    let study = Study::in_memory(config(), Arc::new(clock.clone())).unwrap();
    (study, clock)
}

pub fn session1(group: Group, watched: bool, distracted: bool) -> Questionnaire {
    let primed = group.is_primed();
    Questionnaire::Session1(Session1Answers {
        demographics: Demographics {
            computer_skill: Some(4),
            ..Demographics::default()
        },
        seen_image_before: false,
        touch_screen: false,
        first_attention_point: Some(ClickPoint { x: 320, y: 240 }),
        watched_reveal: primed.then_some(watched),
        distracted: primed.then_some(distracted),
        strategy: Strategy::GeometricPatterns,
        strategy_details: "corners of the grid".into(),
    })
}

pub fn exit(group: Group) -> Questionnaire {
    Questionnaire::Exit(ExitAnswers {
        touch_screen_any_session: false,
        recorded_password: false,
        noticed_priming_only_at_creation: group.is_primed().then_some(true),
        comments: String::new(),
    })
}

/// Enrolls `user` and walks session 1 through to a successful confirmation
/// login, taking `step_ms` between actions. Returns the group.
pub fn run_session1(study: &Study, clock: &VirtualClock, user: &str, pw: &[ClickPoint], step_ms: i64) -> Group {
    let group = study.enroll(user, false).unwrap().group;
    study.practice_complete(user).unwrap();
    study.image_displayed(user).unwrap();
    clock.advance_ms(step_ms);
    study.create_password(user, pw).unwrap();
    study.submit_questionnaire(user, session1(group, true, false)).unwrap();
    study.image_displayed(user).unwrap();
    clock.advance_ms(step_ms);
    assert!(study.login(user, pw, Some(1)).unwrap().success);
    group
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random walk of `n` participants through the protocol: failed attempts,
/// resets in sessions 1 and 2, distraction answers, dropouts. Group-specific
/// passwords: primed groups put their first point `shift` px further right.
pub fn simulate(study: &Study, clock: &VirtualClock, n: usize, seed: u64, shift: u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = study.with_state(|s| s.participants.len());
    for i in start..start + n {
        let user = format!("sim{i}");
        let group = study.enroll(&user, false).unwrap().group;
        let mut pw: Vec<ClickPoint> = (0..5)
            .map(|_| ClickPoint {
                x: rng.random_range(0..300),
                y: rng.random_range(0..480),
            })
            .collect();
        if group.is_primed() {
            pw[0].x += shift;
        }
        let wrong = vec![ClickPoint { x: 639, y: 0 }; 5];
        clock.advance_ms(rng.random_range(1000..60_000));
        study.practice_complete(&user).unwrap();
        study.image_displayed(&user).unwrap();
        clock.advance_ms(rng.random_range(5000..30_000));
        study.create_password(&user, &pw).unwrap();
        let distracted = rng.random_bool(0.2);
        study.submit_questionnaire(&user, session1(group, true, distracted)).unwrap();
        if rng.random_bool(0.1) {
            study.login(&user, &wrong, None).unwrap();
            study.reset(&user, Some(1)).unwrap();
            study.create_password(&user, &pw).unwrap();
        }
        study.image_displayed(&user).unwrap();
        clock.advance_ms(rng.random_range(2000..20_000));
        assert!(study.login(&user, &pw, Some(1)).unwrap().success);
        if rng.random_bool(0.3) {
            continue;
        }

        clock.advance_ms(DAY_MS + rng.random_range(0..30 * HOUR_MS));
        if rng.random_bool(0.15) {
            study.login(&user, &wrong, Some(2)).unwrap();
            let out = study.reset(&user, Some(2)).unwrap();
            study.create_password(&user, &pw).unwrap();
            study.login(&user, &pw, Some(1)).unwrap();
            clock.set(clock_max(study, &user).max(out.session2_not_before.unwrap()));
        }
        study.image_displayed(&user).unwrap();
        for _ in 0..rng.random_range(0..3) {
            study.login(&user, &wrong, Some(2)).unwrap();
        }
        clock.advance_ms(rng.random_range(2000..20_000));
        assert!(study.login(&user, &pw, Some(2)).unwrap().success);
        if rng.random_bool(0.3) {
            continue;
        }

        clock.advance_ms(5 * DAY_MS + rng.random_range(0..HOUR_MS));
        study.image_displayed(&user).unwrap();
        let guess = if rng.random_bool(0.8) { &pw } else { &wrong };
        study.login(&user, guess, Some(3)).unwrap();
        study.submit_questionnaire(&user, exit(group)).unwrap();
        let sus: Vec<u8> = (0..10).map(|_| rng.random_range(1..=5)).collect();
        study.submit_sus(&user, &sus).unwrap();
    }
}

/// Time session 2 opens for `user` (after a rollback and re-confirmation).
fn clock_max(study: &Study, user: &str) -> i64 {
    study.with_state(|s| s.participants[user].sessions[1].opens_at.unwrap())
}
