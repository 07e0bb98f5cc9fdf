//! Machine-readable reports with byte-stable serialization.

use crate::fmt::g17;
use qaoa_exact::optimize::Landscape;

/// One cost term of a run report.
pub struct TermReport {
    /// "const", "vertex", or "edge".
    pub kind: &'static str,
    pub vertices: Vec<usize>,
    /// The bare expectation factor: `F_u`/`F_uv` for pm, `<Z_e>` for gm.
    pub factor: Option<f64>,
    /// Weighted contribution to the total.
    pub value: f64,
}

pub struct RunReport {
    pub input_digest: String,
    pub mode: &'static str,
    pub terms: Vec<TermReport>,
    pub total: f64,
    pub timing_s: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"input_digest\": \"{}\",\n", self.input_digest));
        out.push_str(&format!("  \"mode\": \"{}\",\n", self.mode));
        out.push_str("  \"terms\": [\n");
        for (i, t) in self.terms.iter().enumerate() {
            let vertices = t
                .vertices
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let mut line = format!(
                "    {{\"term\": \"{}\", \"vertices\": [{}]",
                t.kind, vertices
            );
            if let Some(f) = t.factor {
                line.push_str(&format!(", \"factor\": {}", g17(f)));
            }
            line.push_str(&format!(", \"value\": {}}}", g17(t.value)));
            if i + 1 < self.terms.len() {
                line.push(',');
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str("  ],\n");
        out.push_str(&format!("  \"total\": {}", g17(self.total)));
        if let Some(t) = self.timing_s {
            out.push_str(&format!(",\n  \"timing_s\": {}", g17(t)));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("term,vertices,factor,value\n");
        for t in &self.terms {
            let vertices = t
                .vertices
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let factor = t.factor.map(g17).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                t.kind,
                vertices,
                factor,
                g17(t.value)
            ));
        }
        out.push_str(&format!("total,,,{}\n", g17(self.total)));
        out
    }
}

pub struct VerifyReport {
    pub input_digest: String,
    pub mode: &'static str,
    pub total_analytic: f64,
    pub total_oracle: f64,
    pub max_abs_error: f64,
    pub threshold: f64,
    pub ok: bool,
    pub timing_s: Option<f64>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"input_digest\": \"{}\",\n", self.input_digest));
        out.push_str(&format!("  \"mode\": \"{}\",\n", self.mode));
        out.push_str(&format!(
            "  \"total_analytic\": {},\n",
            g17(self.total_analytic)
        ));
        out.push_str(&format!(
            "  \"total_oracle\": {},\n",
            g17(self.total_oracle)
        ));
        out.push_str(&format!(
            "  \"max_abs_error\": {},\n",
            g17(self.max_abs_error)
        ));
        out.push_str(&format!("  \"threshold\": {},\n", g17(self.threshold)));
        out.push_str(&format!(
            "  \"status\": \"{}\"",
            if self.ok { "ok" } else { "mismatch" }
        ));
        if let Some(t) = self.timing_s {
            out.push_str(&format!(",\n  \"timing_s\": {}", g17(t)));
        }
        out.push_str("\n}\n");
        out
    }
}

/// Landscape CSV: header of axis names then "value"; one row per cell,
/// row-major in axis order.
pub fn landscape_csv(ls: &Landscape<f64>) -> String {
    let mut out = String::new();
    let names: Vec<&str> = ls.axes.iter().map(|a| a.name.as_str()).collect();
    out.push_str(&names.join(","));
    out.push_str(",value\n");
    let mut idx = vec![0usize; ls.axes.len()];
    for v in &ls.values {
        let cells: Vec<String> = idx
            .iter()
            .zip(&ls.axes)
            .map(|(&i, ax)| g17(ax.value_at(i)))
            .collect();
        out.push_str(&cells.join(","));
        out.push_str(&format!(",{}\n", g17(*v)));
        // row-major increment, last axis fastest
        let mut k = ls.axes.len();
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < ls.axes[k].count {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

pub fn landscape_json(ls: &Landscape<f64>) -> String {
    let mut out = String::from("{\n  \"axes\": [\n");
    for (i, ax) in ls.axes.iter().enumerate() {
        out.push_str(&format!(
            "    {{\"name\": \"{}\", \"start\": {}, \"stop\": {}, \"count\": {}}}{}\n",
            ax.name,
            g17(ax.start),
            g17(ax.stop),
            ax.count,
            if i + 1 < ls.axes.len() { "," } else { "" }
        ));
    }
    out.push_str("  ],\n  \"values\": [");
    for (i, v) in ls.values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&g17(*v));
    }
    out.push_str("]\n}\n");
    out
}
