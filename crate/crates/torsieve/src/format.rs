//! Text and JSON renderings of weight tables, inversion tables and
//! verification reports.

use serde::Serialize;
use serde_json::{json, Value};
use torsieve_core::combinat::{
    beta_of_lambda, double_coset_blocks, inversion_table, join, BoxedPartition, CosetPerm,
};
use torsieve_core::sieve::{CspReport, IdentityReport, Kind};
use torsieve_core::weightalg::{lambda_weight_table, wt_f_rs, QNumFactor, WeightProduct};
use torsieve_core::Result;

#[derive(Serialize)]
struct FactorJson {
    r: usize,
    a: u32,
    s: usize,
    b: u32,
    m: u32,
}

fn factor_json(f: &QNumFactor) -> FactorJson {
    FactorJson {
        r: f.r,
        a: f.a,
        s: f.s,
        b: f.b,
        m: f.m,
    }
}

pub fn factors_json(factors: &[QNumFactor]) -> Value {
    json!(factors.iter().map(factor_json).collect::<Vec<_>>())
}

/// The cells of λ labelled by their weights, laid out as the echelon
/// diagram: `|` between column blocks, one `-` rule per row-block boundary.
pub fn lambda_table_text(lambda: &BoxedPartition, alpha: &[usize]) -> Result<String> {
    let table = lambda_weight_table(lambda, alpha)?;
    let beta = beta_of_lambda(lambda, alpha)?;
    let width = lambda.width();
    // column blocks of the diagram, left to right: blocks l, ..., 1
    let mut col_block = Vec::with_capacity(width);
    for s in (0..alpha.len()).rev() {
        col_block.extend(std::iter::repeat_n(s, alpha[s] - beta[s]));
    }
    let cells: Vec<Vec<String>> = table.iter().map(|row| row.iter().map(|f| f.to_string()).collect()).collect();
    let mut col_w = vec![0; width];
    for row in &cells {
        for (j, c) in row.iter().enumerate() {
            col_w[j] = col_w[j].max(c.chars().count());
        }
    }
    let mut lines = vec![format!(
        "lambda = {lambda}  alpha = {}  k = {}  beta = {}",
        join(alpha, ","),
        lambda.k(),
        join(&beta, ",")
    )];
    let render = |row: &[String]| -> String {
        let mut s = String::new();
        for (j, c) in row.iter().enumerate() {
            if j > 0 {
                s.push_str(if col_block[j] != col_block[j - 1] { " | " } else { " " });
            }
            s.push_str(c);
            if j + 1 < row.len() {
                s.push_str(&" ".repeat(col_w[j] - c.chars().count()));
            }
        }
        s
    };
    let rule_len = col_w.iter().sum::<usize>() + 3 * width.saturating_sub(1);
    let mut row = 0;
    for (r, &b) in beta.iter().enumerate() {
        if r > 0 {
            lines.push("-".repeat(rule_len.max(1)));
        }
        for _ in 0..b {
            lines.push(render(&cells[row]));
            row += 1;
        }
    }
    Ok(lines.join("\n") + "\n")
}

pub fn lambda_table_json(lambda: &BoxedPartition, alpha: &[usize]) -> Result<Value> {
    let table = lambda_weight_table(lambda, alpha)?;
    let flat: Vec<QNumFactor> = table.iter().flatten().copied().collect();
    Ok(json!({
        "lambda": lambda.nonzero_parts(),
        "alpha": alpha,
        "k": lambda.k(),
        "beta": beta_of_lambda(lambda, alpha)?,
        "rows": table.iter().map(|r| r.iter().map(factor_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "factors": factors_json(&flat),
    }))
}

fn word(w: &[usize]) -> String {
    if w.len() <= 9 {
        w.iter().map(|x| x.to_string()).collect()
    } else {
        join(w, ",")
    }
}

/// Tree weights of the inversions of w; the weight [a,b] stands for
/// [t^{q^a}, t^{q^b}].
pub fn inversion_table_text(w: &[usize]) -> String {
    let mut out = format!("w = {}\n", word(w));
    out.push_str(&format!("{:<12} {:>3} {:>3} {:>3}  {}\n", "(w(i),w(j))", "k", "l", "r", "wt"));
    for row in inversion_table(w) {
        out.push_str(&format!(
            "{:<12} {:>3} {:>3} {:>3}  [{},{}]\n",
            format!("({},{})", row.values.0, row.values.1),
            row.k,
            row.ell,
            row.r,
            row.a,
            row.b
        ));
    }
    out
}

pub fn inversion_table_json(w: &[usize]) -> Value {
    let rows = inversion_table(w);
    let factors: Vec<QNumFactor> = rows.iter().map(|r| QNumFactor::new(1, r.a as u32, 1, r.b as u32)).collect();
    json!({
        "w": word(w),
        "rows": rows.iter().map(|r| json!({
            "values": [r.values.0, r.values.1],
            "positions": [r.positions.0, r.positions.1],
            "k": r.k,
            "ell": r.ell,
            "r": r.r,
            "wt": [r.a, r.b],
        })).collect::<Vec<_>>(),
        "factors": factors_json(&factors),
    })
}

fn product_text(p: &WeightProduct) -> String {
    if p.factors.is_empty() {
        return "1".into();
    }
    p.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("")
}

/// Double-coset data of w for the torus of type α.
pub fn coset_blocks_text(w: &CosetPerm, alpha: &[usize]) -> Result<String> {
    let b = double_coset_blocks(w, alpha)?;
    let mut out = format!("w = {w}  alpha = {}\n", join(alpha, ","));
    for (s, (bs, ws)) in b.beta_s.iter().zip(&b.w_s).enumerate() {
        out.push_str(&format!("beta^({}) = ({})  w_{} = {}\n", s + 1, join(bs, ","), s + 1, word(ws)));
    }
    for (&(r, s), rects) in &b.rectangles {
        let dims: Vec<String> = rects
            .iter()
            .map(|x| format!("{}x{}@({},{})", x.height, x.width, x.a, x.b))
            .collect();
        out.push_str(&format!(
            "F_{r}{s}: {}  wt = {}\n",
            if dims.is_empty() { "-".to_string() } else { dims.join(" ") },
            product_text(&wt_f_rs(rects, r, s))
        ));
    }
    Ok(out)
}

pub fn coset_blocks_json(w: &CosetPerm, alpha: &[usize]) -> Result<Value> {
    let b = double_coset_blocks(w, alpha)?;
    let rects: Vec<Value> = b
        .rectangles
        .iter()
        .map(|(&(r, s), rects)| {
            json!({
                "r": r,
                "s": s,
                "rectangles": rects,
                "factors": factors_json(&wt_f_rs(rects, r, s).factors),
            })
        })
        .collect();
    Ok(json!({
        "w": w.to_string(),
        "alpha": alpha,
        "beta_s": b.beta_s,
        "w_s": b.w_s,
        "blocks": rects,
    }))
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Grassmannian => "grassmannian",
        Kind::Flag => "flag",
        Kind::Setflag => "setflag",
    }
}

/// Human-readable summary: one line per case.
pub fn report_text(r: &CspReport) -> String {
    let i = &r.instance;
    let mut head = format!("{} q={} n={}", kind_name(i.kind), i.q, i.n);
    if let Some(k) = i.k {
        head.push_str(&format!(" k={k}"));
    }
    head.push_str(&format!(" alpha={}", join(&i.alpha, ",")));
    if let Some(b) = &i.beta {
        head.push_str(&format!(" beta={}", join(b, ",")));
    }
    let mut out = format!(
        "{head}\n{} of {} elements ({}), {} evaluations\n",
        r.cases.len(),
        r.group_order,
        if r.exhaustive { "exhaustive" } else { "sampled" },
        r.evaluations
    );
    out.push_str(&format!(
        "{:<16} {:>12} {:>12} {:>10}  {}\n",
        "u", "predicted", "counted", "residual", "status"
    ));
    for c in &r.cases {
        out.push_str(&format!(
            "{:<16} {:>12} {:>12} {:>10.1e}  {}{}\n",
            c.u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            c.predicted,
            c.counted,
            c.residual,
            if c.pass { "ok" } else { "MISMATCH" },
            if c.exact { " (exact)" } else { "" }
        ));
    }
    if let Some(b) = r.burnside {
        out.push_str(&format!("burnside: {}\n", if b { "ok" } else { "FAILED" }));
    }
    if r.structure_violations > 0 {
        out.push_str(&format!("structure violations: {}\n", r.structure_violations));
    }
    out.push_str(&format!("verdict: {}\n", if r.passed() { "pass" } else { "fail" }));
    out
}

pub fn report_json(r: &CspReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize") + "\n"
}

pub fn identity_text(r: &IdentityReport) -> String {
    let mut parts = Vec::new();
    if !r.lhs.is_empty() {
        parts.push(format!("lhs {}, rhs {}", r.lhs, r.rhs));
    }
    if let Some(e) = r.max_error {
        parts.push(format!("max error {e:.1e}"));
    }
    parts.push(format!("{} checks", r.checks));
    format!(
        "{} {}: {} ({})\n",
        r.identity,
        r.parameters,
        if r.ok { "ok" } else { "FAILED" },
        parts.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_layout() {
        let lam = BoxedPartition::new(4, 5, &[5, 4, 1, 1]).unwrap();
        let t = lambda_table_text(&lam, &[4, 2, 3]).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 1 + 4 + 2);
        assert!(lines[1].starts_with("[t_1^q,t_3^{q^2}] | [t_1^q,t_2^{q^2}]"));
        assert!(lines[3].starts_with('-') && lines[4].starts_with('-'));
        assert_eq!(lines[5], "[t_3^q,t_3^{q^2}]");
        let j = lambda_table_json(&lam, &[4, 2, 3]).unwrap();
        assert_eq!(j["factors"].as_array().unwrap().len(), 11);
    }

    #[test]
    fn inversion_layout() {
        let w = [3, 8, 5, 2, 1, 6, 4, 7, 9];
        let t = inversion_table_text(&w);
        assert_eq!(t.lines().count(), 2 + 13);
        assert!(t.contains("(6,4)          7   1   0  [6,5]"));
    }
}
