//! Plain-text reports.

use std::fmt::Write;

use serde::Serialize;

use super::ReportFile;
use crate::certify::Equivalence;

fn snake<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.6}", x + 0.0)).collect();
    format!("[{}]", parts.join(", "))
}

pub(super) fn report_text(file: &ReportFile) -> String {
    let r = &file.report;
    let mut s = String::new();
    let name = r.name.as_deref().unwrap_or("(unnamed)");
    let _ = writeln!(s, "== {name} ({})", file.input);
    let _ = writeln!(
        s,
        "framework: d = {}, {} vertices, {} edges; nd = {}, trivial motions {}; {}",
        r.dimension, r.vertices, r.dof.m, r.dof.nd, r.dof.trivial, r.dof.class
    );
    let pins: Vec<String> = r.pins.iter().map(ToString::to_string).collect();
    let _ = writeln!(s, "pins: {}", pins.join(" "));
    let _ = writeln!(
        s,
        "pinned matrix: {}x{}, rank {} (tolerance {:.3e}), {} flex(es), {} stress(es){}",
        r.dof.m,
        r.dof.free(),
        r.rank,
        r.rank_tolerance,
        r.flexes,
        r.stresses,
        if r.marginal {
            ", NUMERICALLY MARGINAL"
        } else {
            ""
        }
    );
    let sv: Vec<String> = r
        .singular_values
        .iter()
        .map(|x| format!("{x:.3e}"))
        .collect();
    let _ = writeln!(s, "singular values: {}", sv.join(" "));

    let verdicts: Vec<&str> = r.verdicts.iter().map(|v| v.name()).collect();
    let _ = write!(s, "verdict: {}", verdicts.join(" + "));
    match r.agreement {
        Some(a) => {
            let _ = writeln!(s, " (agreement: {a})");
        }
        None => s.push('\n'),
    }

    let _ = writeln!(
        s,
        "prestress: {}; {}",
        snake(&r.prestress.status),
        r.prestress.note
    );
    if let Some(flex) = &r.prestress.flex {
        let _ = writeln!(s, "  flex p' = {}", vector(flex));
    }
    for (i, c) in r.prestress.candidates.iter().enumerate() {
        let _ = writeln!(
            s,
            "  stress {}: energy {:.6e} (bilinear {:.6e}), threshold {:.3e}{}",
            i + 1,
            c.energy,
            c.energy_bilinear,
            c.threshold,
            if c.certifies { ", certifies" } else { "" }
        );
        let _ = writeln!(s, "    omega = {}", vector(&c.stress));
    }

    let t = &r.transverse;
    let _ = writeln!(s, "transverse: {}; {}", snake(&t.status), t.note);
    if let (Some(v), Some(th)) = (t.value, t.threshold) {
        let _ = writeln!(s, "  d[det R]·p' = {v:.6e}, threshold {th:.3e}");
    }
    if let (Some(c), Some(z)) = (t.max_cofactor, t.cofactor_zero_threshold) {
        let _ = writeln!(s, "  largest cofactor {c:.3e} (zero below {z:.3e})");
    }
    for d in &t.dropped_rows {
        let edges: Vec<String> = d.dropped.iter().map(ToString::to_string).collect();
        let edges = edges.join(" ");
        match (d.value, d.threshold) {
            (Some(v), Some(th)) => {
                let _ = writeln!(
                    s,
                    "  drop {edges}: d[det R]·p' = {v:.6e}, threshold {th:.3e}{}",
                    if d.certifies { ", certifies" } else { "" }
                );
                if d.certifies {
                    if let Some(w) = &d.stress {
                        let _ = writeln!(s, "    stress zero on {edges}: {}", vector(w));
                    }
                }
            }
            _ => {
                let _ = writeln!(s, "  drop {edges}: nullity {}, uninformative", d.nullity);
            }
        }
    }

    if let Some(eq) = &r.equivalence {
        let _ = writeln!(
            s,
            "equivalence: alpha = {:.6e}, residual = {:.3e} (threshold {:.1e}), corollary error {:.3e}",
            eq.alpha,
            eq.residual,
            file.tolerances.equivalence_threshold,
            eq.corollary_error()
        );
    }
    if let Some(g) = &file.gradient_check {
        let _ = writeln!(
            s,
            "gradient check: finite differences with step {:.3e}, relative error {:.3e}",
            g.step, g.relative_error
        );
    }
    let _ = writeln!(
        s,
        "settings: rank rule {}, margin {:.1e}, fd step {:.1e}",
        match file.tolerances.rank_rule {
            crate::matrixlab::kernel::RankRule::Standard =>
                "max(rows, cols)·eps·sigma_max".to_string(),
            crate::matrixlab::kernel::RankRule::Relative { factor } =>
                format!("{factor:.1e}·sigma_max"),
        },
        file.tolerances.margin,
        file.tolerances.fd_step
    );
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let _ = writeln!(s, "exit status: {}", file.exit_status);
    s
}

pub(super) fn equivalence_text(eq: &Equivalence, threshold: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "alpha: {:.12e}", eq.alpha);
    let _ = writeln!(
        s,
        "residual: {:.3e} (threshold {threshold:.1e})",
        eq.residual
    );
    let _ = writeln!(
        s,
        "transverse value d[det R]·p': {:.12e}",
        eq.transverse_value
    );
    let _ = writeln!(s, "stress energy: {:.12e}", eq.stress_energy);
    let _ = writeln!(
        s,
        "corollary error |tv - alpha·E| / |tv|: {:.3e}",
        eq.corollary_error()
    );
    if eq.degenerate {
        let _ = writeln!(s, "note: both vectors vanish; proportional only vacuously");
    }
    let _ = writeln!(
        s,
        "{}",
        if eq.passes(threshold) {
            "proportional"
        } else {
            "NOT proportional"
        }
    );
    s
}
