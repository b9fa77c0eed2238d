use proptest::prelude::*;
use quartic_core::arith::IntPoly;
use quartic_core::splitting::{FieldClass, PrimeSet};
use quartic_census::cache::Cache;
use quartic_census::csv_io::emit_to_string;
use quartic_census::quartic::{corpus_from_polynomials, pi_s_census, quartic_corpus, Corpus, CorpusConfig, PiKind};
use std::sync::OnceLock;

fn config(bound: i64, threads: usize) -> CorpusConfig {
    CorpusConfig { coeff_bound: bound, s: PrimeSet::new(&[2, 3]).unwrap(), class_bound_ceiling: 60.0, threads }
}

fn small_corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| quartic_corpus(&config(3, 2), None).unwrap())
}

fn keys(c: &Corpus) -> Vec<String> {
    let mut k: Vec<String> = c.rows.iter().map(|r| r.field_key.clone()).collect();
    k.sort();
    k
}

#[test]
fn presentations_of_one_field_collapse() {
    let polys = [
        IntPoly::from_i64(&[1, 1, 1, 1, 1]),
        IntPoly::from_i64(&[1, -1, 1, -1, 1]),
        IntPoly::from_i64(&[5, 10, 10, 5, 1]),
        IntPoly::from_i64(&[1, -1, -1, 1, 1]),
        IntPoly::from_i64(&[1, 1, -1, -1, 1]),
    ];
    let corpus = corpus_from_polynomials(&polys, &config(0, 1), None).unwrap();
    assert_eq!(keys(&corpus), vec!["1:-1:-1:1:1".to_string(), "1:-1:1:-1:1".to_string()]);
}

#[test]
fn dedupe_is_idempotent() {
    let first = small_corpus();
    let polys: Vec<IntPoly> = first.rows.iter().map(|r| IntPoly::parse_key(&r.field_key).unwrap()).collect();
    let second = corpus_from_polynomials(&polys, &config(3, 1), None).unwrap();
    assert_eq!(keys(first), keys(&second));
}

#[test]
fn discriminants_are_distinct_fields() {
    let corpus = small_corpus();
    assert!(corpus.quarantine.is_empty());
    assert!(corpus.rows.iter().all(|r| r.class != Some(FieldClass::NotInC)));
    // ℚ(ζ5) is in C(S) without a quadratic imaginary twin in the box
    assert!(corpus.rows.iter().any(|r| r.disc == 125.into() && r.class == Some(FieldClass::Cr)));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = quartic_corpus(&config(3, 1), None).unwrap();
    let many = quartic_corpus(&config(3, 8), None).unwrap();
    assert_eq!(emit_to_string(&one.rows).unwrap(), emit_to_string(&many.rows).unwrap());
}

#[test]
fn cache_resumes_and_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(2, 1);
    let s = cfg.s.clone();
    let fresh = {
        let mut cache = Cache::open(dir.path(), &s, 60.0).unwrap();
        quartic_corpus(&cfg, Some(&mut cache)).unwrap()
    };
    let mut cache = Cache::open(dir.path(), &s, 60.0).unwrap();
    assert_eq!(cache.len(), fresh.rows.len());
    let resumed = quartic_corpus(&cfg, Some(&mut cache)).unwrap();
    assert_eq!(emit_to_string(&fresh.rows).unwrap(), emit_to_string(&resumed.rows).unwrap());

    // a tampered discriminant is caught on the next run
    let text = std::fs::read_to_string(cache.path()).unwrap().replace(",117,", ",118,");
    std::fs::write(cache.path(), text).unwrap();
    assert!(Cache::open(dir.path(), &s, 60.0).is_err());
}

#[test]
fn pi_tables_sum_the_rows() {
    let corpus = small_corpus();
    let s = corpus.s.clone();
    let xs = [0.5, 1.0, 1.5, 2.0, 3.0, 5.0];
    let plain = pi_s_census(corpus, &s, &xs, PiKind::Plain).unwrap();
    let tilde = pi_s_census(corpus, &s, &xs, PiKind::Tilde).unwrap();
    assert!(plain.is_monotone() && tilde.is_monotone());
    for (i, &x) in xs.iter().enumerate() {
        let cc = corpus.cc_rows().filter(|r| r.regulator.unwrap() <= x && r.h.is_some());
        let (p, t) = cc.fold((0.0, 0.0), |(p, t), r| {
            let w = (r.h.unwrap() * r.lambda_s.unwrap()) as f64;
            (p + w, t + w * r.nu.unwrap())
        });
        assert_eq!(plain.rows[i].partial_sum, p);
        assert!((tilde.rows[i].partial_sum - t).abs() < 1e-9 * t.max(1.0));
    }
    assert!((plain.rows[1].target - 4f64.exp() / 8.0).abs() < 1e-12);
    assert!((tilde.rows[1].target - 4f64.exp() / 2.0).abs() < 1e-12);
    assert!((plain.rows[1].target - 6.82477).abs() < 1e-5);
    assert!((tilde.rows[1].target - 27.299).abs() < 1e-3);
    // a box of height 3 certifies nothing
    assert_eq!(corpus.certified_regulator(), 0.0);
    assert!(plain.rows.iter().all(|r| r.lower_bound));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pi_sum_is_additive(mut xs in prop::collection::vec(0.1f64..6.0, 1..6)) {
        xs.sort_by(f64::total_cmp);
        let corpus = small_corpus();
        let table = pi_s_census(corpus, &corpus.s, &xs, PiKind::Plain).unwrap();
        for (row, &x) in table.rows.iter().zip(&xs) {
            let direct: u64 = corpus
                .cc_rows()
                .filter(|r| r.regulator.unwrap() <= x)
                .map(|r| r.h.unwrap() * r.lambda_s.unwrap())
                .sum();
            prop_assert_eq!(row.partial_sum, direct as f64);
            prop_assert!((row.ratio - row.partial_sum / row.target).abs() <= 1e-15 * row.ratio.abs());
        }
    }
}
