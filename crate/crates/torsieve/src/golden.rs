//! Golden files: fixed renderings checked into `tests/golden`.

use std::path::{Path, PathBuf};

use torsieve_core::combinat::{BoxedPartition, CosetPerm};
use torsieve_core::ffield::{BlockOrder, FieldTower, TorusElement};
use torsieve_core::sieve::{run, CspInstance};
use torsieve_core::Result;

use crate::format;
use crate::grid::to_grid;

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn report(inst: CspInstance) -> Result<String> {
    let mut r = run(&inst)?;
    r.elapsed_ms = None;
    Ok(format::report_json(&r))
}

/// Every golden file as (name, contents).
pub fn generate() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();

    let alpha = [4, 2, 3];
    let lam = BoxedPartition::new(4, 5, &[5, 4, 1, 1])?;
    out.push(("lambda_5411_alpha423.txt".into(), format::lambda_table_text(&lam, &alpha)?));
    out.push(("lambda_5411_alpha423.json".into(), pretty(&format::lambda_table_json(&lam, &alpha)?)));

    let w = [3, 8, 5, 2, 1, 6, 4, 7, 9];
    out.push(("perm_385216479.txt".into(), format::inversion_table_text(&w)));
    out.push(("perm_385216479.json".into(), pretty(&format::inversion_table_json(&w))));
    let p = CosetPerm::new(&[1; 9], &w)?;
    out.push(("cosets_385216479_alpha333.txt".into(), format::coset_blocks_text(&p, &[3, 3, 3])?));
    let w2 = [5, 3, 4, 6, 1, 2, 7, 8];
    let p2 = CosetPerm::new(&[1, 3, 4], &w2)?;
    out.push(("cosets_53461278_beta134_alpha44.json".into(), pretty(&format::coset_blocks_json(&p2, &[4, 4])?)));

    out.push(("verify_grassmannian_q2_alpha22_k2.json".into(), report(CspInstance::grassmannian(2, &[2, 2], 2))?));
    out.push(("verify_flag_q2_alpha21_beta12.json".into(), report(CspInstance::flag(2, &[2, 1], &[1, 2]))?));
    out.push(("verify_setflag_alpha32_beta221.json".into(), report(CspInstance::setflag(&[3, 2], &[2, 2, 1]))?));

    let tower = FieldTower::new(2)?;
    let mut tower = tower;
    tower.ensure(2)?;
    tower.ensure(3)?;
    let u = TorusElement::generators(&tower, &[2, 3]);
    out.push(("torus_q2_alpha23.grid".into(), to_grid(&u.matrix(&tower, BlockOrder::Descending))));
    Ok(out)
}

/// Rewrite all golden files under `dir`; returns how many were written.
pub fn regenerate(dir: &Path) -> std::io::Result<usize> {
    let files = generate().map_err(std::io::Error::other)?;
    std::fs::create_dir_all(dir)?;
    for (name, body) in &files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(files.len())
}

/// Names of golden files under `dir` that are missing or differ.
pub fn stale(dir: &Path) -> std::io::Result<Vec<String>> {
    let files = generate().map_err(std::io::Error::other)?;
    Ok(files
        .into_iter()
        .filter(|(name, body)| std::fs::read_to_string(dir.join(name)).ok().as_deref() != Some(body.as_str()))
        .map(|(name, _)| name)
        .collect())
}
