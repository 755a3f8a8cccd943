use std::path::PathBuf;

use rug::Integer;

use sawbox::analysis::{
    run_pipeline, series_extend, EnsembleConfig, ExtendMode, Pipeline, PipelineOptions, Precision,
    Series,
};
use sawbox::io::ingest;

fn data(name: &str) -> Series {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name);
    ingest(&path, None, 0).unwrap()
}

fn opts() -> PipelineOptions {
    PipelineOptions::new(Precision::digits(80))
}

fn f(out: &sawbox::analysis::PipelineOutput, name: &str) -> f64 {
    out.get(name)
        .unwrap_or_else(|| panic!("missing {name}"))
        .to_f64()
}

#[test]
fn table_growth_estimates() {
    let a = data("anywhere.txt");
    let out = run_pipeline(Pipeline::LambdaFits, &a, None, &opts()).unwrap();
    for k in ["lambda_k2", "lambda_k3"] {
        assert!((f(&out, k) - 1.74455).abs() < 1e-3, "{k} = {}", f(&out, k));
    }
    let out = run_pipeline(Pipeline::RatioOfRatios, &a, None, &opts()).unwrap();
    let l2 = 1.7445498f64.powi(2);
    assert!((f(&out, "lambda2_quadratic") - l2).abs() < 5e-3);
    assert!((f(&out, "lambda2_cubic") - l2).abs() < 5e-3);
}

#[test]
fn bounding_box_quotient_tends_to_one() {
    let out = run_pipeline(
        Pipeline::Hadamard,
        &data("exact_bbox.txt"),
        Some(&data("anywhere.txt")),
        &opts(),
    )
    .unwrap();
    assert!((f(&out, "quotient_17") - 0.9997175764).abs() < 1e-9);
    assert!(
        (f(&out, "da_mu") - 1.0).abs() < 1e-3,
        "mu = {}",
        f(&out, "da_mu")
    );
    assert_eq!(out.series.as_ref().unwrap().len(), 31);
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

#[test]
fn extension_spread_covers_error() {
    let prec = Precision::digits(100);
    let cfg = EnsembleConfig {
        orders: vec![1, 2, 3],
        mode: ExtendMode::Coefficients,
        precision: prec,
        ..EnsembleConfig::default()
    };
    let catalan: Vec<Integer> = (0..40u32).map(|n| binomial(2 * n, n) / (n + 1)).collect();
    let central: Vec<Integer> = (0..40u32).map(|n| binomial(2 * n, n)).collect();
    for (name, full) in [("catalan", catalan), ("central", central)] {
        let known = Series::from_integers(name, 0, full[..30].to_vec());
        let e = series_extend(&known, 5, &cfg).unwrap();
        for (l, mean, spread) in &e.estimates {
            let exact = prec.float(&full[*l as usize]);
            let err = (mean.clone() - &exact).abs() / &exact;
            let allowed = (spread.clone() / &exact) * 10u32 + prec.tolerance();
            assert!(
                err <= allowed,
                "{name} term {l}: error {err} spread {spread}"
            );
        }
    }
}
