//! Parallel sweeps over group elements.

use std::time::Instant;

use rayon::prelude::*;
use torsieve_core::sieve::{assemble, prepare, CaseRecord, CspInstance, CspReport};
use torsieve_core::{Error, Result};

/// Verify one instance, evaluating cases in parallel. Cases come back in
/// element order, so reports do not depend on scheduling.
pub fn verify(inst: &CspInstance) -> Result<CspReport> {
    let start = Instant::now();
    let v = prepare(inst)?;
    let cases: Vec<CaseRecord> = v
        .elements()
        .par_iter()
        .map(|e| v.case(e))
        .collect::<Result<Vec<_>>>()?;
    let mut report = assemble(v.as_ref(), cases);
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Run `f` inside a pool of `threads` workers (all cores when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameters(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsieve_core::sieve::run;

    #[test]
    fn parallel_matches_sequential() {
        let inst = CspInstance::grassmannian(3, &[1, 2], 1);
        let mut a = verify(&inst).unwrap();
        let b = run(&inst).unwrap();
        a.elapsed_ms = None;
        assert_eq!(a, b);
        assert!(a.passed());
        let c = with_threads(Some(2), || verify(&inst)).unwrap().unwrap();
        assert_eq!(c.cases, b.cases);
    }
}
