use proptest::prelude::*;
use torsieve::format::{report_json, report_text};
use torsieve::grid::{from_grid, to_grid};
use torsieve::runner;
use torsieve_core::fqlinalg::MatFq;
use torsieve_core::sieve::{run, CspInstance, Mode};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_round_trip(
        q in prop::sample::select(vec![2u32, 3, 7, 11, 13]),
        rows in 1usize..6,
        cols in 1usize..6,
        raw in prop::collection::vec(any::<u32>(), 36),
    ) {
        let data: Vec<u32> = raw[..rows * cols].iter().map(|x| x % q).collect();
        let m = MatFq::from_vec(q, rows, cols, data);
        prop_assert_eq!(from_grid(q, &to_grid(&m)).unwrap(), m);
    }

    #[test]
    fn parallel_report_matches_sequential(logs in 1usize..8, seed in any::<u64>(), k in 0usize..5) {
        let inst = CspInstance::grassmannian(2, &[2, 2], k.min(4)).with_mode(Mode::Sampled { limit: logs, seed });
        let mut a = runner::verify(&inst).unwrap();
        let mut b = run(&inst).unwrap();
        a.elapsed_ms = None;
        b.elapsed_ms = None;
        prop_assert_eq!(report_json(&a), report_json(&b));
        prop_assert_eq!(report_text(&a), report_text(&b));
    }
}

#[test]
fn report_json_carries_the_schema() {
    let r = run(&CspInstance::setflag(&[2, 2], &[2, 2])).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["instance"]["kind"], "setflag");
    assert_eq!(v["cases"].as_array().unwrap().len(), 4);
    for c in v["cases"].as_array().unwrap() {
        assert_eq!(c["predicted"], c["counted"]);
        assert!(c["u"].is_array());
    }
    assert_eq!(v["verdict"], "pass");
}
