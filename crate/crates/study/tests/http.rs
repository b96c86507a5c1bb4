mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use common::*;
use http_body_util::BodyExt;
use passpoints_core::corpus::read_jsonl;
use passpoints_study::http::router;
use passpoints_study::{Study, StudyConfig, VirtualClock};
use serde_json::{json, Value};
use tower::ServiceExt;

struct Client {
    app: axum::Router,
    /// Every participant-facing response body seen so far.
    bodies: Vec<Value>,
}

impl Client {
    fn new(cfg: StudyConfig, clock: &VirtualClock) -> Self {
        let study = Arc::new(Study::in_memory(cfg, Arc::new(clock.clone())).unwrap());
        Self {
            app: router(study),
            bodies: Vec::new(),
        }
    }

    async fn send(&mut self, req: Request<Body>) -> (StatusCode, Vec<u8>) {
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        (status, bytes)
    }

    async fn post(&mut self, path: &str, body: Value) -> (StatusCode, Value) {
        let req = Request::post(path)
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(body.to_string()))
            .unwrap();
        let (status, bytes) = self.send(req).await;
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        self.bodies.push(v.clone());
        (status, v)
    }

    async fn get(&mut self, path: &str) -> (StatusCode, Value) {
        let (status, bytes) = self.send(Request::get(path).body(Body::empty()).unwrap()).await;
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        self.bodies.push(v.clone());
        (status, v)
    }
}

fn pw_json() -> Value {
    json!(password().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>())
}

fn contains_number(v: &Value, n: u64) -> bool {
    match v {
        Value::Number(x) => x.as_u64() == Some(n),
        Value::Array(a) => a.iter().any(|x| contains_number(x, n)),
        Value::Object(o) => o.values().any(|x| contains_number(x, n)),
        _ => false,
    }
}

fn contains_key(v: &Value, key: &str) -> bool {
    match v {
        Value::Array(a) => a.iter().any(|x| contains_key(x, key)),
        Value::Object(o) => o.iter().any(|(k, x)| k == key || contains_key(x, key)),
        _ => false,
    }
}

fn s1_answers(group: &str) -> Value {
    let primed = group != "control";
    json!({
        "form": "session1",
        "seen_image_before": false,
        "touch_screen": false,
        "first_attention_point": [320, 240],
        "watched_reveal": if primed { json!(true) } else { Value::Null },
        "distracted": if primed { json!(false) } else { Value::Null },
        "strategy": "geometric_patterns",
        "strategy_details": "lines"
    })
}

#[tokio::test]
async fn full_flow_never_returns_the_password() {
    let clock = VirtualClock::new(T0);
    let mut c = Client::new(config(), &clock);

    let (s, a) = c.post("/enroll", json!({"user_id": "p1"})).await;
    assert_eq!(s, StatusCode::CREATED);
    let group = a["group"].as_str().unwrap().to_string();
    let expected_dir = if group == "control" { "none" } else { group.as_str() };
    assert_eq!(a["reveal"]["direction"], expected_dir);
    assert_eq!(a["reveal"]["duration_secs"], 20.0);
    assert_eq!(a["session"]["step"], "practice");

    assert_eq!(c.post("/practice-complete", json!({"user_id": "p1"})).await.0, StatusCode::OK);
    assert_eq!(c.post("/image-displayed", json!({"user_id": "p1"})).await.0, StatusCode::OK);
    clock.advance_ms(9000);
    let (s, v) = c.post("/password", json!({"user_id": "p1", "points": pw_json()})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["next_step"], "questionnaire");
    let (s, _) = c.post("/questionnaire", json!({"user_id": "p1", "answers": s1_answers(&group)})).await;
    assert_eq!(s, StatusCode::OK);
    c.post("/image-displayed", json!({"user_id": "p1"})).await;
    clock.advance_ms(3000);
    let (s, v) = c.post("/login", json!({"user_id": "p1", "points": pw_json(), "session": 1})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["success"], true);
    let opens = v["next_session_opens_at"].as_i64().unwrap();

    let (s, v) = c.post("/login", json!({"user_id": "p1", "points": pw_json()})).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "session_not_open");
    assert_eq!(v["opens_at"], opens);

    clock.set(opens);
    c.post("/image-displayed", json!({"user_id": "p1"})).await;
    let wrong = json!([[0, 0], [1, 1], [2, 2], [3, 3], [4, 4]]);
    let (_, v) = c.post("/login", json!({"user_id": "p1", "points": wrong})).await;
    assert_eq!(v["success"], false);
    assert_eq!(v["unsuccessful_attempts"], 1);
    let (_, v) = c.post("/login", json!({"user_id": "p1", "points": pw_json(), "session": 2})).await;
    assert_eq!(v["success"], true);
    clock.set(v["next_session_opens_at"].as_i64().unwrap());

    let (s, v) = c.post("/reset", json!({"user_id": "p1"})).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"], "reset_not_allowed");
    c.post("/image-displayed", json!({"user_id": "p1"})).await;
    let (_, v) = c.post("/login", json!({"user_id": "p1", "points": pw_json(), "session": 3})).await;
    assert_eq!(v["exit_survey_available"], true);
    let exit = json!({
        "form": "exit",
        "touch_screen_any_session": false,
        "recorded_password": false,
        "noticed_priming_only_at_creation": if group == "control" { Value::Null } else { json!(false) }
    });
    assert_eq!(c.post("/questionnaire", json!({"user_id": "p1", "answers": exit})).await.0, StatusCode::OK);
    let (s, v) = c.post("/sus", json!({"user_id": "p1", "answers": [4, 2, 4, 2, 4, 2, 4, 2, 4, 2]})).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["score"], 75.0);
    assert_eq!(v["next_step"], "finished");
    let (s, v) = c.get("/assignment?user_id=p1").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["session"]["step"], "finished");

    for body in &c.bodies {
        assert!(!contains_key(body, "points") && !contains_key(body, "password"), "{body}");
        for p in password() {
            assert!(!contains_number(body, u64::from(p.x)), "{body}");
            assert!(!contains_number(body, u64::from(p.y)), "{body}");
        }
    }
}

#[tokio::test]
async fn errors_carry_codes_and_statuses() {
    let clock = VirtualClock::new(T0);
    let mut c = Client::new(config(), &clock);

    let req = Request::post("/enroll")
        .header(header::CONTENT_TYPE, "application/json")
        .header("sec-ch-ua-mobile", "?1")
        .body(Body::from(json!({"user_id": "m"}).to_string()))
        .unwrap();
    let (s, body) = c.send(req).await;
    assert_eq!(s, StatusCode::FORBIDDEN);
    assert_eq!(serde_json::from_slice::<Value>(&body).unwrap()["error"], "mobile_client");
    assert_eq!(c.post("/enroll", json!({"user_id": "m2", "mobile": true})).await.0, StatusCode::FORBIDDEN);

    assert_eq!(c.post("/enroll", json!({"user_id": "u"})).await.0, StatusCode::CREATED);
    let (s, v) = c.post("/enroll", json!({"user_id": "u"})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::CONFLICT, Some("duplicate_enrollment")));

    let (s, v) = c.get("/assignment?user_id=nobody").await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::NOT_FOUND, Some("unknown_user")));
    let (s, v) = c.get("/assignment").await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("schema_violation")));

    let (s, v) = c.post("/enroll", json!({"user": "x"})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("schema_violation")));

    c.post("/practice-complete", json!({"user_id": "u"})).await;
    let four = json!([[1, 1], [2, 2], [3, 3], [4, 4]]);
    let (s, v) = c.post("/password", json!({"user_id": "u", "points": four})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("invalid_input")));
    let (s, v) = c.post("/login", json!({"user_id": "u", "points": pw_json()})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::CONFLICT, Some("wrong_step")));

    c.post("/password", json!({"user_id": "u", "points": pw_json()})).await;
    let mut bad = s1_answers("LTR");
    bad["strategy"] = json!("telepathy");
    let (s, v) = c.post("/questionnaire", json!({"user_id": "u", "answers": bad})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("schema_violation")));
    let mut extra = s1_answers("control");
    extra["favourite_colour"] = json!("blue");
    let (s, _) = c.post("/questionnaire", json!({"user_id": "u", "answers": extra})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, v) = c.post("/sus", json!({"user_id": "u", "answers": [1, 2, 3]})).await;
    assert_eq!((s, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("schema_violation")));
}

#[tokio::test]
async fn export_requires_admin_token() {
    let clock = VirtualClock::new(T0);
    let cfg = config();
    let study = Arc::new(Study::in_memory(cfg, Arc::new(clock.clone())).unwrap());
    simulate(&study, &clock, 40, 5, 0);
    let app = router(study.clone());

    let get = |auth: Option<&str>, q: &str| {
        let mut b = Request::get(format!("/export{q}"));
        if let Some(a) = auth {
            b = b.header(header::AUTHORIZATION, a);
        }
        b.body(Body::empty()).unwrap()
    };
    for auth in [None, Some("Bearer wrong"), Some("secret")] {
        let resp = app.clone().oneshot(get(auth, "")).await.unwrap();
        assert_eq!(resp.status(), StatusCode::UNAUTHORIZED);
    }
    let resp = app.clone().oneshot(get(Some("Bearer secret"), "?filter=all")).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let records = read_jsonl(std::io::Cursor::new(&bytes)).unwrap();
    assert_eq!(records.len(), 40);

    let resp = app.clone().oneshot(get(Some("Bearer secret"), "?filter=bogus")).await.unwrap();
    assert_eq!(resp.status(), StatusCode::UNPROCESSABLE_ENTITY);

    // no token configured: export is off
    let closed = Study::in_memory(StudyConfig { admin_token: None, ..config() }, Arc::new(clock)).unwrap();
    let resp = router(Arc::new(closed)).oneshot(get(Some("Bearer secret"), "")).await.unwrap();
    assert_eq!(resp.status(), StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn serves_image_assets_from_the_asset_dir() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("grid.png"), b"\x89PNG fake").unwrap();
    std::fs::write(dir.path().join(".hidden"), b"no").unwrap();
    let cfg = StudyConfig { asset_dir: Some(dir.path().to_path_buf()), ..config() };
    let clock = VirtualClock::new(T0);
    let mut c = Client::new(cfg, &clock);
    let (s, body) = c.send(Request::get("/images/grid.png").body(Body::empty()).unwrap()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, b"\x89PNG fake");
    for bad in ["/images/.hidden", "/images/missing.png", "/images/..%2Fsecret"] {
        let (s, _) = c.send(Request::get(bad).body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::NOT_FOUND, "{bad}");
    }
}
