//! Remote scorer against an in-process HTTP stub.

#![cfg(feature = "remote")]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use annokit::confidence::{score_pool, Query, RemoteConfig, RemoteScorer};
use annokit::metrics::synthetic::SyntheticSpec;
use annokit::{run_selection, ConfidenceScorer, Error, Method, ScoreError, SelectionConfig};

type RequestLog = Arc<Mutex<Vec<(Option<String>, serde_json::Value)>>>;

struct Stub {
    url: String,
    requests: RequestLog,
}

/// Serves `reply(request_body)` for every request on a background thread.
fn stub(reply: impl Fn(&serde_json::Value) -> (u16, String) + Send + 'static) -> Stub {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/generate", listener.local_addr().unwrap());
    let requests = Arc::new(Mutex::new(Vec::new()));
    let log = requests.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0;
            let mut auth = None;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end();
                if line.is_empty() {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
                if lower.starts_with("authorization:") {
                    auth = Some(line["authorization:".len()..].trim().to_string());
                }
            }
            let mut body = vec![0; len];
            reader.read_exact(&mut body).unwrap();
            let body: serde_json::Value = serde_json::from_slice(&body).unwrap();
            let (status, text) = reply(&body);
            log.lock().unwrap().push((auth, body));
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{text}",
                text.len()
            )
            .unwrap();
        }
    });
    Stub { url, requests }
}

fn query<'a>(id: &'a str, text: &'a str) -> Query<'a> {
    Query { id, input_text: text, embedding: &[1.0] }
}

#[test]
fn request_schema_and_mean_logprob() {
    let s = stub(|_| (200, r#"{"text":" yes","token_logprobs":[-1.0,-3.0]}"#.into()));
    let mut cfg = RemoteConfig::new(&s.url);
    cfg.token = Some("secret".into());
    let scorer = RemoteScorer::new(cfg);
    assert_eq!(scorer.score(&[], &query("q", "is it?")).unwrap(), -2.0);

    let reqs = s.requests.lock().unwrap();
    let (auth, body) = &reqs[0];
    assert_eq!(auth.as_deref(), Some("Bearer secret"));
    assert_eq!(body["prompt"], "Input: is it?\nOutput:");
    assert_eq!(body["max_tokens"], 64);
    assert_eq!(body["temperature"], 0);
}

#[test]
fn error_kinds_are_distinct() {
    let s = stub(|body| match body["prompt"].as_str().unwrap() {
        p if p.contains("empty") => (200, r#"{"text":"","token_logprobs":[]}"#.into()),
        p if p.contains("garbled") => (200, "not json".into()),
        _ => (500, "down".into()),
    });
    let scorer = RemoteScorer::new(RemoteConfig::new(&s.url));
    assert_eq!(scorer.score(&[], &query("a", "empty")).unwrap_err(), ScoreError::EmptyGeneration);
    assert!(matches!(scorer.score(&[], &query("b", "garbled")), Err(ScoreError::Malformed(_))));
    assert!(matches!(scorer.score(&[], &query("c", "other")), Err(ScoreError::Transport(_))));
}

#[test]
fn vote_k_end_to_end_over_http() {
    // Confidence depends on the query text so buckets are non-trivial.
    let s = stub(|body| {
        let p = body["prompt"].as_str().unwrap();
        let n = p.len() % 7;
        (200, format!(r#"{{"text":"x","token_logprobs":[-0.5,{}]}}"#, -(n as f64)))
    });
    let pool = SyntheticSpec::new(3, 12, 4, 2).generate_pool().unwrap();
    let cfg = SelectionConfig { k: 6, ..SelectionConfig::new(Method::VoteK, 10) };
    let scorer = RemoteScorer::new(RemoteConfig::new(&s.url));
    let r = run_selection(&pool, &cfg, Some(&scorer)).unwrap();
    assert_eq!(r.selected.len(), 10);
    let reqs = s.requests.lock().unwrap();
    assert_eq!(reqs.len(), pool.len() - 1);
    // Stage-one pick appears as a demonstration with its label.
    let demo = pool.get(pool.position(&r.selected[0]).unwrap());
    let expect = format!("Input: {}\nOutput: {}", demo.text.as_ref().unwrap(), demo.label.as_ref().unwrap());
    assert!(reqs[0].1["prompt"].as_str().unwrap().starts_with(&expect));
}

#[test]
fn pool_scoring_reports_failing_id() {
    let s = stub(|body| {
        if body["prompt"].as_str().unwrap().contains("bad") {
            (200, r#"{"text":"","token_logprobs":[]}"#.into())
        } else {
            (200, r#"{"text":"x","token_logprobs":[-0.25]}"#.into())
        }
    });
    let scorer = RemoteScorer::new(RemoteConfig::new(&s.url));
    let qs = [query("q1", "fine"), query("q2", "bad"), query("q3", "fine")];
    let err = score_pool(&scorer, &[], &qs).unwrap_err();
    assert!(matches!(err, Error::Score { ref id, source: ScoreError::EmptyGeneration } if id == "q2"));
    let table = score_pool(&scorer, &[], &[qs[0], qs[2]]).unwrap();
    assert_eq!(table.get("q3"), Some(-0.25));
}
