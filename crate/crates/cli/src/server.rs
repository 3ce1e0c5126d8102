//! HTTP/JSON front end. Resources are loaded once and shared read-only;
//! every request parses in its own chart.

use crate::render::{derivation_svg, derived_svg};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::sync::Arc;
use xtag::lexicon::Pos;
use xtag::parser::{derived_state, derived_tree, Derivation, DerivationEdge, Operation, ReplayError, StartCategory};
use xtag::pipeline::{Engine, PipelineConfig, TaggerMode, SCHEMA_VERSION};
use xtag::ranking::Weights;

pub struct AppState {
    pub engine: Engine,
    pub config: PipelineConfig,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/parse", post(parse))
        .route("/grammar/trees", get(list_trees))
        .route("/grammar/trees/{name}", get(show_tree))
        .route("/combine", post(combine))
        .route("/lexicon/{word}", get(lexicon))
        .route("/render/{id}", get(render))
        .with_state(state)
}

fn error(status: StatusCode, message: impl ToString) -> Response {
    (status, Json(json!({ "v": SCHEMA_VERSION, "error": message.to_string() }))).into_response()
}

fn json_text(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn health() -> Response {
    Json(json!({ "v": SCHEMA_VERSION, "status": "ok" })).into_response()
}

/// Per-request changes to the server's pipeline configuration.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub tagger: Option<String>,
    pub start: Option<String>,
    pub n_best: Option<usize>,
    /// 0 disables the frequency filter.
    pub stat_k: Option<usize>,
    pub weights: Option<String>,
    pub max_parses: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, base: &PipelineConfig) -> Result<PipelineConfig, String> {
        let mut c = base.clone();
        if let Some(t) = &self.tagger {
            c.tagger = t.parse::<TaggerMode>().map_err(|e| e.to_string())?;
        }
        if let Some(s) = &self.start {
            c.start = s.parse::<StartCategory>().map_err(|e| e.to_string())?;
        }
        if let Some(n) = self.n_best {
            c.n_best = n;
        }
        if let Some(k) = self.stat_k {
            c.stat_k = (k > 0).then_some(k);
        }
        if let Some(w) = &self.weights {
            c.weights = w.parse::<Weights>().map_err(|e| e.to_string())?;
        }
        if let Some(m) = self.max_parses {
            c.max_parses = m;
        }
        Ok(c)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParseRequest {
    pub sentence: String,
    #[serde(default)]
    pub overrides: Overrides,
}

async fn parse(State(st): State<Arc<AppState>>, body: Result<Json<ParseRequest>, axum::extract::rejection::JsonRejection>) -> Response {
    let Ok(Json(req)) = body else { return error(StatusCode::BAD_REQUEST, "malformed parse request") };
    let config = match req.overrides.apply(&st.config) {
        Ok(c) => c,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let st2 = st.clone();
    let result = tokio::task::spawn_blocking(move || st2.engine.parse_sentence(&config, &req.sentence)).await;
    match result {
        Ok(Ok(resp)) => json_text(resp.to_json()),
        Ok(Err(e)) if e.is_config() => error(StatusCode::BAD_REQUEST, e),
        Ok(Err(e)) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e),
    }
}

#[derive(Serialize)]
struct TreeSummary<'a> {
    name: &'a str,
    kind: xtag::grammar::TreeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<&'a str>,
}

async fn list_trees(State(st): State<Arc<AppState>>) -> Response {
    let trees: Vec<TreeSummary> = st
        .engine
        .bundle
        .grammar
        .trees()
        .map(|t| TreeSummary { name: &t.name, kind: t.kind, family: t.family.as_deref() })
        .collect();
    Json(json!({ "v": SCHEMA_VERSION, "trees": trees })).into_response()
}

async fn show_tree(State(st): State<Arc<AppState>>, Path(name): Path<String>) -> Response {
    match st.engine.bundle.grammar.tree(&name) {
        Some(t) => Json(json!({ "v": SCHEMA_VERSION, "tree": &**t })).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("unknown tree {name}")),
    }
}

/// Hand combination: attach `child` to the root tree of `host` at `address`.
/// Both sides are derivation texts; a lone tree is `(αNXN[map])`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineRequest {
    pub host: String,
    pub op: String,
    pub address: String,
    pub child: String,
}

async fn combine(State(st): State<Arc<AppState>>, body: Result<Json<CombineRequest>, axum::extract::rejection::JsonRejection>) -> Response {
    let Ok(Json(req)) = body else { return error(StatusCode::BAD_REQUEST, "malformed combine request") };
    let parsed = (|| -> Result<Derivation, String> {
        let mut host: Derivation = req.host.parse().map_err(|e| format!("host: {e}"))?;
        let child: Derivation = req.child.parse().map_err(|e| format!("child: {e}"))?;
        let op = match req.op.as_str() {
            "substitute" | "subst" => Operation::Substitution,
            "adjoin" => Operation::Adjunction,
            other => return Err(format!("unknown operation {other:?} (expected substitute or adjoin)")),
        };
        let address = req.address.parse().map_err(|e| format!("address: {e}"))?;
        host.children.push(DerivationEdge { op, address, child });
        Ok(host)
    })();
    let d = match parsed {
        Ok(d) => d,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let grammar = &st.engine.bundle.grammar;
    match derived_state(&d, grammar) {
        Ok(state) => {
            let complete = derived_tree(&d, grammar).ok();
            Json(json!({
                "v": SCHEMA_VERSION,
                "derivation": d.to_string(),
                "tree": state.view(),
                "complete": complete.is_some(),
            }))
            .into_response()
        }
        Err(ReplayError::Compose { error: e, .. }) => (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({
                "v": SCHEMA_VERSION,
                "error": e.to_string(),
                "reason": e.reason(),
                "address": e.address(),
                "path": e.path(),
            })),
        )
            .into_response(),
        Err(ReplayError::UnknownTree(t)) => error(StatusCode::NOT_FOUND, format!("unknown tree {t}")),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e),
    }
}

async fn lexicon(State(st): State<Arc<AppState>>, Path(word): Path<String>) -> Response {
    let lex = &st.engine.bundle.lexicon;
    let morph = lex.morph.lookup(&word);
    let mut roots: Vec<(&str, Pos)> = morph.iter().map(|m| (m.root.as_str(), m.pos)).collect();
    roots.dedup();
    let mut synt = Vec::new();
    for (root, pos) in &roots {
        for e in lex.synt.lookup(root, *pos) {
            if !synt.contains(&e) {
                synt.push(e);
            }
        }
    }
    if morph.is_empty() && synt.is_empty() {
        return error(StatusCode::NOT_FOUND, format!("unknown word {word}"));
    }
    Json(json!({ "v": SCHEMA_VERSION, "word": word, "morph": morph, "synt": synt })).into_response()
}

#[derive(Debug, Deserialize)]
pub struct RenderQuery {
    pub format: Option<String>,
    /// `derived` (default) or `derivation`.
    pub view: Option<String>,
}

/// `id` is the derivation's text form, percent-encoded.
async fn render(State(st): State<Arc<AppState>>, Path(id): Path<String>, Query(q): Query<RenderQuery>) -> Response {
    if q.format.as_deref().is_some_and(|f| f != "svg") {
        return error(StatusCode::BAD_REQUEST, "only format=svg is supported");
    }
    let d: Derivation = match id.parse() {
        Ok(d) => d,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let svg = match q.view.as_deref().unwrap_or("derived") {
        "derivation" => derivation_svg(&d),
        "derived" => match derived_tree(&d, &st.engine.bundle.grammar) {
            Ok(t) => derived_svg(&t),
            Err(ReplayError::UnknownTree(t)) => return error(StatusCode::NOT_FOUND, format!("unknown tree {t}")),
            Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e),
        },
        other => return error(StatusCode::BAD_REQUEST, format!("unknown view {other:?}")),
    };
    ([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response()
}
