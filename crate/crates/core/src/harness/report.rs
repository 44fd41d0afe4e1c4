use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// Outcome of one battery on one model.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub model: String,
    pub instances: usize,
    pub passed: bool,
    /// One witness per failing instance, enough to reproduce it.
    pub failures: Vec<Value>,
    /// Aggregate figures such as dimensions and certificate lengths.
    pub stats: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LemmaReport {
    pub fn new(lemma: &str, model: &str) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            model: model.to_string(),
            instances: 0,
            passed: true,
            failures: Vec::new(),
            stats: Value::Null,
            elapsed: Duration::ZERO,
        }
    }

    /// Records one instance; `witness` is kept only when `ok` is false.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.passed = false;
            self.failures.push(witness());
        }
    }

    pub fn fail(&mut self, witness: Value) {
        self.record(false, || witness);
    }

    pub fn with_stats(mut self, stats: Value) -> Self {
        self.stats = stats;
        self
    }

    /// One line of JSON with stable field order.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}
