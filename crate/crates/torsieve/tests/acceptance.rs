//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsieve::format;
use torsieve::golden;
use torsieve::runner;
use torsieve_core::combinat::{
    beta_of_lambda, compositions, double_coset_blocks, inversion_table, pivot_columns, BoxedPartition, CosetPerm,
};
use torsieve_core::ffield::build_field;
use torsieve_core::sieve::{
    check_qt_eval, check_qt_sum, check_upper_block, check_vandermonde, conjugation_suite, CspInstance, CspReport, Mode,
};
use torsieve_core::weightalg::{wt_f_rs, wt_lambda, QNumFactor};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Pass/fail of a whole batch of reports, with the first failure if any.
#[derive(Default)]
struct Tally {
    instances: u64,
    cases: u64,
    failed: Vec<String>,
    burnside_bad: u64,
    structure: u64,
    exact: u64,
}

impl Tally {
    fn add(&mut self, label: String, r: &CspReport) {
        self.instances += 1;
        self.cases += r.cases.len() as u64;
        self.structure += r.structure_violations;
        self.exact += r.cases.iter().filter(|c| c.exact).count() as u64;
        if r.exhaustive && r.burnside != Some(true) {
            self.burnside_bad += 1;
        }
        if !r.passed() {
            let first = r.failures().next().map(|c| format!("{:?}", c.u)).unwrap_or_default();
            self.failed.push(format!("{label} at u={first}"));
        }
    }

    fn ok(&self) -> bool {
        self.failed.is_empty() && self.burnside_bad == 0 && self.structure == 0 && self.instances > 0
    }

    fn summary(&self) -> String {
        let mut s = format!(
            "{} instances, {} torus elements, {} exactly evaluated, {} structure violations, {} Burnside failures",
            self.instances, self.cases, self.exact, self.structure, self.burnside_bad
        );
        if let Some(f) = self.failed.first() {
            s.push_str(&format!("; {} failing, first {f}", self.failed.len()));
        }
        s
    }
}

fn c1() -> Outcome {
    let lam = BoxedPartition::new(4, 5, &[5, 4, 1, 1]).unwrap();
    let beta = beta_of_lambda(&lam, &[4, 2, 3]).unwrap();
    let mut piv = pivot_columns(&lam);
    piv.sort_unstable();
    outcome(beta == [2, 0, 2] && piv == [2, 3, 7, 9], format!("beta = {beta:?}, pivots = {piv:?}"))
}

fn c2() -> Outcome {
    let lam = BoxedPartition::new(4, 5, &[5, 4, 1, 1]).unwrap();
    let f = QNumFactor::new;
    // the displayed diagram, row by row
    let mut want = vec![
        f(1, 1, 3, 2),
        f(1, 1, 2, 2),
        f(1, 2, 2, 3),
        f(1, 1, 1, 2),
        f(1, 2, 1, 3),
        f(1, 0, 3, 2),
        f(1, 0, 2, 2),
        f(1, 1, 2, 3),
        f(1, 0, 1, 2),
        f(3, 1, 3, 2),
        f(3, 0, 3, 2),
    ];
    let mut got = wt_lambda(&lam, &[4, 2, 3]).unwrap().sorted_factors();
    got.sort();
    want.sort();
    let text = format::lambda_table_text(&lam, &[4, 2, 3]).unwrap();
    let golden_ok = std::fs::read_to_string(golden::default_dir().join("lambda_5411_alpha423.txt")).ok() == Some(text);
    outcome(
        got == want && golden_ok,
        format!("{} of {} cell weights match, golden file match {golden_ok}", if got == want { got.len() } else { 0 }, want.len()),
    )
}

fn c3() -> Outcome {
    let w = [3, 8, 5, 2, 1, 6, 4, 7, 9];
    // (w(i), w(j)), k, l, r, [a, b]
    let want: [((usize, usize), usize, usize, usize, (usize, usize)); 13] = [
        ((2, 1), 5, 4, 0, (4, 0)),
        ((3, 1), 5, 3, 0, (4, 1)),
        ((5, 1), 5, 2, 0, (4, 2)),
        ((8, 1), 5, 1, 0, (4, 3)),
        ((3, 2), 4, 3, 0, (3, 0)),
        ((5, 2), 4, 2, 0, (3, 1)),
        ((8, 2), 4, 1, 0, (3, 2)),
        ((5, 4), 5, 2, 1, (5, 3)),
        ((6, 4), 7, 1, 0, (6, 5)),
        ((8, 4), 5, 1, 1, (5, 4)),
        ((8, 5), 3, 1, 0, (2, 1)),
        ((8, 6), 5, 1, 2, (6, 5)),
        ((8, 7), 5, 1, 3, (7, 6)),
    ];
    let got = inversion_table(&w);
    let matched = got
        .iter()
        .zip(&want)
        .filter(|(g, w)| (g.values, g.k, g.ell, g.r, (g.a, g.b)) == **w)
        .count();
    let golden_ok = std::fs::read_to_string(golden::default_dir().join("perm_385216479.txt")).ok()
        == Some(format::inversion_table_text(&w));
    outcome(
        got.len() == 13 && matched == 13 && golden_ok,
        format!("{matched} of 13 rows match ({} computed), golden file match {golden_ok}", got.len()),
    )
}

fn c4() -> Outcome {
    let w = CosetPerm::new(&[1, 3, 4], &[5, 3, 4, 6, 1, 2, 7, 8]).unwrap();
    let b = double_coset_blocks(&w, &[4, 4]).unwrap();
    let f = QNumFactor::new;
    let mut want = [f(2, 0, 1, 1), f(2, 1, 1, 2)].repeat(3);
    want.sort();
    let mut got = wt_f_rs(&b.rectangles[&(2, 1)], 2, 1).sorted_factors();
    got.sort();
    let ok = b.beta_s == [vec![0, 2, 2], vec![1, 1, 2]]
        && b.w_s == [vec![3, 4, 1, 2], vec![5, 6, 7, 8]]
        && got == want;
    outcome(
        ok,
        format!("beta^(s) = {:?}, w_s = {:?}, wt(F_21) has {} factors", b.beta_s, b.w_s, got.len()),
    )
}

fn grassmannian_instances() -> Vec<(u32, Vec<usize>, usize)> {
    let mut out = Vec::new();
    for (q, max_n) in [(2u32, 6usize), (3, 5)] {
        for n in 1..=max_n {
            for alpha in compositions(n) {
                for k in 0..=n {
                    out.push((q, alpha.clone(), k));
                }
            }
        }
    }
    out
}

fn c5(conj: &mut BTreeMap<String, (u64, u64)>) -> Outcome {
    let mut t = Tally::default();
    let mut refined_cells = 0u64;
    for (q, alpha, k) in grassmannian_instances() {
        let inst = CspInstance::grassmannian(q, &alpha, k).with_cross_check(true);
        let r = runner::verify(&inst).unwrap();
        refined_cells += r.cases.iter().map(|c| c.refined.len() as u64).sum::<u64>();
        t.add(format!("q={q} alpha={alpha:?} k={k}"), &r);
        if alpha.iter().sum::<usize>() <= 5 && k > 0 && k < alpha.iter().sum() {
            let c = conjugation_suite(&inst, 50, 7).unwrap();
            let e = conj.entry("grassmannian".into()).or_default();
            e.0 += 1;
            e.1 += u64::from(!c.ok());
        }
    }
    outcome(t.ok(), format!("{}; {refined_cells} refined checks", t.summary()))
}

fn c6(conj: &mut BTreeMap<String, (u64, u64)>) -> Outcome {
    let mut t = Tally::default();
    for n in 1..=5 {
        for alpha in compositions(n) {
            for beta in compositions(n) {
                let inst = CspInstance::flag(2, &alpha, &beta).with_cross_check(true);
                let r = runner::verify(&inst).unwrap();
                t.add(format!("alpha={alpha:?} beta={beta:?}"), &r);
                if n <= 4 && beta.len() > 1 {
                    let c = conjugation_suite(&inst, 50, 11).unwrap();
                    let e = conj.entry("flag".into()).or_default();
                    e.0 += 1;
                    e.1 += u64::from(!c.ok());
                }
            }
        }
    }
    outcome(t.ok(), t.summary())
}

fn c7() -> Outcome {
    let mut t = Tally::default();
    for n in 1..=8 {
        for alpha in compositions(n) {
            for beta in compositions(n) {
                let r = runner::verify(&CspInstance::setflag(&alpha, &beta)).unwrap();
                t.add(format!("alpha={alpha:?} beta={beta:?}"), &r);
            }
        }
    }
    outcome(t.ok(), t.summary())
}

fn c8() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for q in 2..=5u64 {
        for n in 1..=8 {
            let comps = compositions(n);
            for a in &comps {
                for b in &comps {
                    checks += 1;
                    let r = check_vandermonde(q, a, b);
                    if !r.ok {
                        bad.push(r.parameters);
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} identities, {} failing {:?}", bad.len(), bad.first()))
}

fn c9() -> Outcome {
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for q in [2u64, 3] {
        for n in 1..=6 {
            for (i, beta) in compositions(n).into_iter().enumerate() {
                let r = check_qt_sum(&beta, q, 50, 1000 * n as u64 + i as u64, 1e-8).unwrap();
                checks += 1;
                worst = worst.max(r.max_error.unwrap_or(0.0));
                if !r.ok {
                    bad.push(r.parameters);
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checks} (q, beta) pairs x 50 points, max relative error {worst:.2e}, {} failing", bad.len()),
    )
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut passed = 0;
    let mut bad = Vec::new();
    for trial in 0..200 {
        let q = if trial % 2 == 0 { 2 } else { 3 };
        let a = rng.random_range(1..=6usize);
        let field = build_field(q, a).unwrap();
        let order = field.unit_order();
        let (l1, l2) = (rng.random_range(0..order), rng.random_range(0..order));
        let d1 = field.subfield_degree(field.exp_of(l1));
        let d2 = field.subfield_degree(field.exp_of(l2));
        let m1 = d1 * rng.random_range(1..=6 / d1);
        let m2 = d2 * rng.random_range(1..=6 / d2);
        let r = check_upper_block(q, a, (l1, l2), m1, m2).unwrap();
        if r.ok {
            passed += 1;
        } else {
            bad.push(r.parameters);
        }
    }
    outcome(passed == 200, format!("{passed} of 200 random cases, first failure {:?}", bad.first()))
}

fn c11() -> Outcome {
    let mut checks = 0;
    let mut units = 0;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for q in [2u32, 3] {
        for n in 1..=8 {
            for beta in compositions(n) {
                let g = beta.iter().fold(n, |g, &b| gcd(g, b));
                for d in (1..=g).filter(|d| g % d == 0) {
                    let r = check_qt_eval(&beta, q, d, 1e-8).unwrap();
                    checks += 1;
                    units += r.checks;
                    worst = worst.max(r.max_error.unwrap_or(0.0));
                    if !r.ok {
                        bad.push(r.parameters);
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checks} (q, beta, d) triples over {units} units, max residual {worst:.2e}, {} failing", bad.len()),
    )
}

fn c12(conj: &BTreeMap<String, (u64, u64)>) -> Outcome {
    let mut t = Tally::default();
    for alpha in [vec![4, 4], vec![8]] {
        let inst = CspInstance::grassmannian(2, &alpha, 4).with_mode(Mode::Sampled { limit: 64, seed: 12 });
        let r = runner::verify(&inst).unwrap();
        t.add(format!("sampled alpha={alpha:?}"), &r);
    }
    let conj_ok = conj.values().all(|&(n, bad)| n > 0 && bad == 0) && conj.len() == 2;
    let conj_text: Vec<String> = conj
        .iter()
        .map(|(k, (n, bad))| format!("{k}: {n} instances x 50, {bad} failing"))
        .collect();
    outcome(
        t.ok() && conj_ok,
        format!("conjugation {}; sampled n=8: {}", conj_text.join(", "), t.summary()),
    )
}

fn main() {
    let mut conj = BTreeMap::new();
    let mut results: Vec<(usize, &str, Duration, Duration, Outcome)> = Vec::new();
    let ms = Duration::from_millis;
    let secs = Duration::from_secs;
    macro_rules! crit {
        ($n:expr, $name:expr, $limit:expr, $body:expr) => {{
            let start = Instant::now();
            let o = $body;
            results.push(($n, $name, start.elapsed(), $limit, o));
            let (n, name, took, limit, o) = results.last().unwrap();
            let pass = o.pass && took <= limit;
            println!(
                "criterion {n:>2} {}  {name}: {} [{:.3} s, limit {} s]",
                if pass { "PASS" } else { "FAIL" },
                o.detail,
                took.as_secs_f64(),
                limit.as_secs_f64()
            );
        }};
    }
    crit!(1, "beta and pivots of (5,4,1,1)", ms(1), c1());
    crit!(2, "weight table of (5,4,1,1)", ms(1), c2());
    crit!(3, "inversion table of 385216479", secs(1), c3());
    crit!(4, "double coset blocks of 53461278", secs(1), c4());
    crit!(5, "exhaustive Grassmannian sieving", secs(300), c5(&mut conj));
    crit!(6, "exhaustive flag sieving", secs(600), c6(&mut conj));
    crit!(7, "set-flag sieving", secs(60), c7());
    crit!(8, "generalised q-Vandermonde", secs(60), c8());
    crit!(9, "(q,t)-multinomial tree sum", secs(60), c9());
    crit!(10, "upper block product formula", secs(60), c10());
    crit!(11, "(q,t)-multinomial at omega(u)", secs(60), c11());
    crit!(12, "property suites and sampled sweeps", secs(900), c12(&conj));
    let failed = results.iter().filter(|(_, _, took, limit, o)| !(o.pass && took <= limit)).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
