//! The classification report: curve data and a table of highest weights.

use serde::Serialize;

use w2p_core::exactlin::{Poly1, Rational};
use w2p_core::fock::ModelParams;
use w2p_core::zhu::{classify, INJECTIVITY_NOTE};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub p: String,
    pub central_charge: String,
    #[serde(rename = "C_p")]
    pub c_p: String,
    /// `(i, j, c)` for the term `c x^i y^j`, by descending `(j, i)`.
    #[serde(rename = "P")]
    pub poly: Vec<(u32, u32, String)>,
    /// Coefficients from degree 0 upward.
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub g: Vec<String>,
    pub parameterization: String,
    pub samples: Vec<SampleRow>,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRow {
    pub t: String,
    pub u: String,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub version: String,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`, or null.
    pub timestamp: Option<String>,
}

fn coeffs(f: &Poly1) -> Vec<String> {
    f.dense().iter().map(Rational::to_string).collect()
}

impl ReportDocument {
    pub fn build(params: &ModelParams, timestamp: Option<String>) -> Self {
        let cls = classify(params);
        let c = &cls.curve;
        let mut poly: Vec<(u32, u32, String)> = c
            .poly
            .terms()
            .map(|((i, j), x)| (i, j, x.to_string()))
            .collect();
        poly.sort_by_key(|&(i, j, _)| std::cmp::Reverse((j, i)));
        Self {
            p: c.p.to_string(),
            central_charge: c.central_charge.to_string(),
            c_p: c.c_p.to_string(),
            poly,
            u: coeffs(&c.u),
            v: coeffs(&c.v),
            g: coeffs(&c.g),
            parameterization: format!("(x, y) = (u(t), v(t)); {INJECTIVITY_NOTE}"),
            samples: cls
                .samples
                .iter()
                .map(|s| SampleRow {
                    t: s.t.to_string(),
                    u: s.x.to_string(),
                    v: s.y.to_string(),
                })
                .collect(),
            metadata: Metadata {
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self, params: &ModelParams) -> String {
        let c = w2p_core::zhu::curve(params);
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k}: {v}\n"));
        line("p", self.p.clone());
        line("central_charge", self.central_charge.clone());
        line("C_p", self.c_p.clone());
        line("P(x,y)", c.poly.to_string());
        line("u(t)", c.u.to_string());
        line("v(t)", c.v.to_string());
        line("g(x)", c.g.to_string());
        line("parameterization", self.parameterization.clone());
        for s in &self.samples {
            line("sample", format!("t={} u={} v={}", s.t, s.u, s.v));
        }
        line("version", self.metadata.version.clone());
        line("timestamp", self.metadata.timestamp.clone().unwrap_or_else(|| "none".into()));
        out
    }
}
