//! Browser playground: a 2-D clustered pool, any selector, and retrieval
//! for a clicked point.
//!
//! Points live in the plane and are embedded as `(x, y, 1)`, so cosine
//! similarity behaves like a soft angular distance around the origin.
//! Everything returns JSON strings; `www/app.js` draws them on a canvas.

use annokit::metrics::synthetic::SyntheticSpec;
use annokit::metrics::{compute_report, Metric, MetricReport};
use annokit::retrieval::{rank_by_similarity, RetrievalOptions};
use annokit::{run_selection, Error, Instance, Method, MockScorer, Pool, Stage};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub cluster: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pick {
    pub index: usize,
    pub stage: Stage,
    pub bucket: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionView {
    pub method: Method,
    pub picks: Vec<Pick>,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievedPoint {
    pub index: usize,
    pub similarity: f64,
}

/// Native core of the playground.
pub struct Playground {
    points: Vec<Point>,
    pool: Pool,
    selected: Vec<usize>,
}

impl Playground {
    pub fn generate(clusters: usize, per_cluster: usize, spread: f64, seed: u64) -> Result<Self, Error> {
        let spec = SyntheticSpec {
            spread,
            separation: 1.6,
            ..SyntheticSpec::new(clusters, per_cluster, 2, seed)
        };
        let raw = spec.generate()?;
        let points: Vec<Point> = raw
            .iter()
            .map(|i| Point { x: i.embedding[0], y: i.embedding[1], cluster: i.cluster.unwrap_or(0) })
            .collect();
        let lifted: Vec<Instance> = raw
            .into_iter()
            .map(|i| Instance { embedding: vec![i.embedding[0], i.embedding[1], 1.0], ..i })
            .collect();
        Ok(Playground { points, pool: Pool::new(lifted)?, selected: Vec::new() })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn select(&mut self, method: &str, budget: usize, k: usize, seed: u64) -> Result<SelectionView, Error> {
        let method: Method = method.parse()?;
        let config = annokit::SelectionConfig {
            k,
            seed,
            ..annokit::SelectionConfig::new(method, budget)
        };
        let result = run_selection(&self.pool, &config, Some(&MockScorer))?;
        let positions = self.pool.positions(&result.selected)?;
        let metrics = compute_report(&self.pool, &positions, &[Metric::DivF, Metric::Repr, Metric::Coverage])?;
        self.selected = positions.clone();
        Ok(SelectionView {
            method,
            picks: positions
                .iter()
                .zip(&result.trace)
                .map(|(&index, t)| Pick { index, stage: t.stage, bucket: t.bucket })
                .collect(),
            metrics,
        })
    }

    /// Nearest selected points to `(x, y)`, ascending similarity, at most
    /// `max_examples`.
    pub fn retrieve(&self, x: f64, y: f64, max_examples: usize) -> Result<Vec<RetrievedPoint>, Error> {
        if self.selected.is_empty() {
            return Err(Error::config("run a selection first"));
        }
        let options = RetrievalOptions { max_examples: Some(max_examples), ..Default::default() };
        let annotated = self.pool.select(&self.selected);
        let ranked = rank_by_similarity(&annotated, &[x, y, 1.0])?;
        let cap = options.max_examples.unwrap_or(usize::MAX).min(ranked.len());
        Ok(ranked[..cap]
            .iter()
            .rev()
            .map(|e| RetrievedPoint { index: self.selected[e.target], similarity: e.similarity })
            .collect())
    }
}

fn js_err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

#[wasm_bindgen(js_name = Playground)]
pub struct WebPlayground(Playground);

#[wasm_bindgen(js_class = Playground)]
impl WebPlayground {
    #[wasm_bindgen(constructor)]
    pub fn new(clusters: usize, per_cluster: usize, spread: f64, seed: u64) -> Result<WebPlayground, JsError> {
        Playground::generate(clusters, per_cluster, spread, seed).map(WebPlayground).map_err(js_err)
    }

    /// `[{x, y, cluster}]`
    pub fn points(&self) -> String {
        json(&self.0.points())
    }

    /// `{method, picks: [{index, stage, bucket}], metrics}`
    pub fn select(&mut self, method: &str, budget: usize, k: usize, seed: u64) -> Result<String, JsError> {
        self.0.select(method, budget, k, seed).map(|v| json(&v)).map_err(js_err)
    }

    /// `[{index, similarity}]`, closest last.
    pub fn retrieve(&self, x: f64, y: f64, max_examples: usize) -> Result<String, JsError> {
        self.0.retrieve(x, y, max_examples).map(|v| json(&v)).map_err(js_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_is_seeded() {
        let a = Playground::generate(4, 30, 0.3, 9).unwrap();
        let b = Playground::generate(4, 30, 0.3, 9).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.points().len(), 120);
        assert_ne!(a.points(), Playground::generate(4, 30, 0.3, 10).unwrap().points());
    }

    #[test]
    fn every_method_runs() {
        let mut p = Playground::generate(5, 40, 0.3, 1).unwrap();
        for m in Method::ALL {
            let v = p.select(m.as_str(), 12, 20, 3).unwrap();
            assert_eq!(v.picks.len(), 12);
            assert!(v.metrics.div_f.is_some() && v.metrics.repr.is_some());
        }
        let v = p.select("vote_k", 20, 20, 0).unwrap();
        assert_eq!(v.picks.iter().filter(|p| p.stage == Stage::GraphVote).count(), 2);
        assert!(p.select("nope", 3, 5, 0).is_err());
        assert!(p.select("random", 0, 5, 0).is_err());
    }

    #[test]
    fn retrieve_returns_selected_points_in_ascending_order() {
        let mut p = Playground::generate(3, 30, 0.3, 2).unwrap();
        assert!(p.retrieve(0.0, 0.0, 4).is_err());
        let picks: Vec<usize> = p.select("mfl", 10, 20, 0).unwrap().picks.iter().map(|x| x.index).collect();
        let got = p.retrieve(0.5, -0.5, 4).unwrap();
        assert_eq!(got.len(), 4);
        assert!(got.iter().all(|r| picks.contains(&r.index)));
        assert!(got.windows(2).all(|w| w[0].similarity <= w[1].similarity));

        // The closest entry is the best cosine among all picks.
        let cos = |i: usize| {
            let q = [0.5, -0.5, 1.0];
            let pt = p.points()[i];
            let e = [pt.x, pt.y, 1.0];
            let dot: f64 = q.iter().zip(&e).map(|(a, b)| a * b).sum();
            dot / (q.iter().map(|v| v * v).sum::<f64>().sqrt() * e.iter().map(|v| v * v).sum::<f64>().sqrt())
        };
        let best = picks.iter().copied().max_by(|&a, &b| cos(a).total_cmp(&cos(b)).then(b.cmp(&a))).unwrap();
        assert_eq!(got.last().unwrap().index, best);
    }

    #[test]
    fn json_shapes() {
        let mut p = WebPlayground(Playground::generate(2, 10, 0.3, 4).unwrap());
        let pts: serde_json::Value = serde_json::from_str(&p.points()).unwrap();
        assert_eq!(pts.as_array().unwrap().len(), 20);
        assert!(pts[0]["x"].is_number() && pts[0]["cluster"].is_number());
        let sel: serde_json::Value = serde_json::from_str(&p.select("vote_k", 5, 6, 0).unwrap()).unwrap();
        assert_eq!(sel["method"], "vote_k");
        assert_eq!(sel["picks"][0]["stage"], "graph_vote");
        assert!(sel["metrics"]["cluster_coverage"]["total"] == 2);
        let r: serde_json::Value = serde_json::from_str(&p.retrieve(0.1, 0.1, 3).unwrap()).unwrap();
        assert_eq!(r.as_array().unwrap().len(), 3);
    }
}
