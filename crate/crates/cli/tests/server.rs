use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use std::sync::{Arc, OnceLock};
use tower::ServiceExt;
use xtag::pipeline::{Engine, PipelineConfig, TaggerMode};
use xtag_cli::server::{router, AppState};

fn state() -> Arc<AppState> {
    static S: OnceLock<Arc<AppState>> = OnceLock::new();
    S.get_or_init(|| Arc::new(AppState { engine: Engine::english().unwrap(), config: PipelineConfig::default() }))
        .clone()
}

fn app() -> Router {
    router(state())
}

async fn send(req: Request<Body>) -> (StatusCode, String, String) {
    let resp = app().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp.headers().get("content-type").map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    (status, ctype, String::from_utf8(body.to_vec()).unwrap())
}

async fn get(uri: &str) -> (StatusCode, String, String) {
    send(Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    let req = Request::post(uri).header("content-type", "application/json").body(Body::from(body.to_string())).unwrap();
    let (status, _, text) = send(req).await;
    (status, serde_json::from_str(&text).unwrap())
}

#[tokio::test]
async fn health() {
    let (status, _, body) = get("/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap(), json!({"v": 1, "status": "ok"}));
}

#[tokio::test]
async fn parse_returns_the_engine_response_bytes() {
    let s = "I had a map yesterday";
    let req = Request::post("/parse")
        .header("content-type", "application/json")
        .body(Body::from(json!({ "sentence": s }).to_string()))
        .unwrap();
    let (status, ctype, body) = send(req).await;
    assert_eq!(status, StatusCode::OK);
    assert!(ctype.starts_with("application/json"));
    let direct = state().engine.parse_sentence(&PipelineConfig::default(), s).unwrap().to_json();
    assert_eq!(body, direct);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["v"], 1);
    assert_eq!(v["parses"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn parse_overrides() {
    let s = "the men store maps";
    let (status, v) = post("/parse", json!({ "sentence": s, "overrides": { "tagger": "retry", "stat_k": 0 } })).await;
    assert_eq!(status, StatusCode::OK);
    let config = PipelineConfig { tagger: TaggerMode::RetryOnFailure, stat_k: None, ..PipelineConfig::default() };
    let direct: Value = serde_json::from_str(&state().engine.parse_sentence(&config, s).unwrap().to_json()).unwrap();
    assert_eq!(v, direct);
    assert_eq!(v["tagger_retry"], true);
}

#[tokio::test]
async fn parse_rejects_bad_requests() {
    let (status, _) = post("/parse", json!({ "sentence": "I slept", "overrides": { "tagger": "sometimes" } })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post("/parse", json!({ "sentence": "I slept", "colour": "red" })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post("/parse", json!({ "sentence": "I slept", "overrides": { "n_best": 0 } })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn tree_listing_and_lookup() {
    let (status, _, body) = get("/grammar/trees").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    let trees = v["trees"].as_array().unwrap();
    assert!(trees.iter().any(|t| t["name"] == "αnx0Vnx1" && t["family"] == "Tnx0Vnx1"));

    let (status, _, body) = get("/grammar/trees/%CE%B1nx0Vnx1").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["tree"]["name"], "αnx0Vnx1");

    let (status, _, _) = get("/grammar/trees/nosuchtree").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn combine_substitutes_into_an_open_slot() {
    let (status, v) = post(
        "/combine",
        json!({ "host": "(αnx0Vnx1[saw])", "op": "substitute", "address": "2.2", "child": "(αNXN[maps])" }),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["derivation"], "(αnx0Vnx1[saw] (subst @2.2 αNXN[maps]))");
    assert_eq!(v["complete"], false);
    assert!(v["tree"].to_string().contains("maps"));
}

#[tokio::test]
async fn combine_reports_null_adjunction() {
    let (status, v) =
        post("/combine", json!({ "host": "(βN0nx0V[slept])", "op": "adjoin", "address": "1", "child": "(βCOMPs[that])" })).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    assert_eq!(v["reason"], "null-adjunction constraint");
}

#[tokio::test]
async fn combine_rejects_malformed_input() {
    let (status, _) = post("/combine", json!({ "host": "(αnx0Vnx1[saw]", "op": "substitute", "address": "2.2", "child": "(αNXN[maps])" })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post("/combine", json!({ "host": "(αnx0Vnx1[saw])", "op": "graft", "address": "2.2", "child": "(αNXN[maps])" })).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn lexicon_lookup() {
    let (status, _, body) = get("/lexicon/maps").await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert!(!v["morph"].as_array().unwrap().is_empty());
    assert!(!v["synt"].as_array().unwrap().is_empty());
    let (status, _, _) = get("/lexicon/blorf").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn render_both_views() {
    let resp = state().engine.parse_sentence(&PipelineConfig::default(), "I had a map yesterday").unwrap();
    let id: String = resp.parses[0]
        .derivation
        .bytes()
        .map(|b| if b.is_ascii_alphanumeric() { (b as char).to_string() } else { format!("%{b:02X}") })
        .collect();
    for view in ["derived", "derivation"] {
        let (status, ctype, body) = get(&format!("/render/{id}?format=svg&view={view}")).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        assert_eq!(ctype, "image/svg+xml");
        assert!(body.starts_with("<svg") && body.contains("yesterday"));
    }
    let (_, _, derivation) = get(&format!("/render/{id}?view=derivation")).await;
    assert!(derivation.contains("stroke-dasharray"));
    let (status, _, _) = get(&format!("/render/{id}?format=png")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}
