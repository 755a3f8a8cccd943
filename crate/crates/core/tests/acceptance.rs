//! Acceptance run: one line per criterion. Exits nonzero when a criterion
//! fails, except the cycles criterion while the 26-term cycle data is not
//! available locally (reported as an expected failure).

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rug::ops::Pow;
use sawbox::analysis::pipeline::{d_pipeline, hadamard, lambda_fits, ratio_fits};
use sawbox::analysis::{
    series_extend, BigFloat, EnsembleConfig, ExtendMode, PipelineOptions, Precision, Provenance,
    Series,
};
use sawbox::io::{ingest, read_bfile};
use sawbox::lattice::{LatticeBox, WalkClass};
use sawbox::oracle::Oracle;
use sawbox::transfer::{assemble_square, RectTable, SweepKind};
use sawbox::verify::{
    check_reconstruction, engine_equivalence, inequality_chain, move_claims, ChainCounts,
    ANYWHERE_SMALL, EXACT_BBOX_SMALL,
};
use sawbox::BigCount;

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.pass &= ok;
        self.lines.push(format!(
            "    [{}] {}",
            if ok { "ok" } else { "FAIL" },
            what.into()
        ));
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn prec() -> Precision {
    Precision::default()
}

fn table1() -> Series {
    ingest(&data("anywhere.txt"), None, 0).expect("anywhere counts")
}

fn table2() -> Series {
    ingest(&data("exact_bbox.txt"), None, 0).expect("exact bounding box counts")
}

fn f(v: &BigFloat) -> f64 {
    v.to_f64()
}

fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol
}

fn timed(mut o: Outcome, start: Instant, cap: Duration) -> Outcome {
    let t = start.elapsed();
    o.check(t < cap, format!("runtime {:.1?} < {:?}", t, cap));
    o
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let oracle = Oracle::default();
    for side in 1..=4u32 {
        let v = oracle
            .count_many(
                &[WalkClass::Anywhere, WalkClass::ExactBBox],
                LatticeBox::square(side),
            )
            .unwrap();
        let (a, e) = (
            ANYWHERE_SMALL[side as usize - 1],
            EXACT_BBOX_SMALL[side as usize - 1],
        );
        o.check(
            v[0] == a && v[1] == e,
            format!("L={side}: A={} (want {a}), exact={} (want {e})", v[0], v[1]),
        );
    }
    timed(o, start, Duration::from_secs(60))
}

fn criterion_2(table: &RectTable, elapsed: Duration) -> Outcome {
    let mut o = Outcome::new();
    let (t1, t2) = (table1(), table2());
    for side in 1..=10u32 {
        let a = table.assemble(side).unwrap();
        let want_a = t1.get(side).unwrap().value.to_string();
        let e = &table.exact[&(side, side)];
        let want_e = t2.get(side).unwrap().value.to_string();
        o.check(
            a.to_string() == want_a && e.to_string() == want_e,
            format!("L={side}: A={a} exact={e}"),
        );
    }
    o.check(
        table.assemble(10).unwrap() == "5028368533802124263609489682".parse::<BigCount>().unwrap(),
        "A_10 = 5028368533802124263609489682",
    );
    o.check(
        elapsed < Duration::from_secs(600),
        format!("table to L=10 in {elapsed:.1?} < 10 min"),
    );
    o
}

fn criterion_3(table: &RectTable) -> Outcome {
    let mut o = Outcome::new();
    for c in engine_equivalence(table, 4).unwrap() {
        o.check(c.passed, format!("{}: {}", c.name, c.detail));
    }
    let c = check_reconstruction(table);
    o.check(c.passed, format!("{}: {}", c.name, c.detail));
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let oracle = Oracle::default();
    let exact = |h: u32, l: u32| oracle.count(WalkClass::ExactBBox, LatticeBox::new(l, h));
    for l in 1..=2 {
        let degenerate = exact(0, l).unwrap();
        o.check(degenerate == 1, format!("exact(0,{l}) = {degenerate}"));
    }
    for (side, want) in [(1u32, 12u32), (2, 322)] {
        let a = assemble_square(side, exact).unwrap();
        o.check(a == want, format!("assembled A_{side} = {a} (want {want})"));
    }
    o
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let s = table1();
    o.check(
        s.len() == 31 && s.exact_count() == 17,
        format!("{} terms, {} exact", s.len(), s.exact_count()),
    );
    let opts = PipelineOptions::new(prec());
    let lam = lambda_fits(&s, &opts).unwrap();
    let q = f(lam.get("lambda_k2").unwrap());
    let c = f(lam.get("lambda_k3").unwrap());
    o.check(
        within(q, 1.74411, 5e-4),
        format!("quadratic lambda intercept {q:.6} vs 1.74411 +- 5e-4"),
    );
    o.check(
        within(c, 1.74462, 5e-4),
        format!("cubic lambda intercept {c:.6} vs 1.74462 +- 5e-4"),
    );
    let rr = ratio_fits(&s, &opts).unwrap();
    let l2 = f(rr.get("lambda2_quadratic").unwrap());
    o.check(
        within(l2, 3.04350, 1e-3),
        format!("ratio-of-ratios quadratic intercept {l2:.6} vs 3.04350 +- 1e-3"),
    );
    timed(o, start, Duration::from_secs(60))
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let out = d_pipeline(&table1(), &PipelineOptions::new(prec())).unwrap();
    let b = f(out.get("b_log_lambda").unwrap());
    let g = f(out.get("g").unwrap());
    o.check(
        (-0.027..=-0.021).contains(&b),
        format!("b log(lambda) = {b:.5} in [-0.027, -0.021]"),
    );
    o.check(
        (3.4..=4.4).contains(&g),
        format!("g = {g:.4} in [3.4, 4.4]"),
    );
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let out = hadamard(&table2(), &table1(), &PipelineOptions::new(prec())).unwrap();
    let q17 = f(out.get("quotient_17").unwrap());
    o.check(
        within(q17, 0.99971757, 1e-7),
        format!("quotient at L=17 = {q17:.10} vs 0.99971757 +- 1e-7"),
    );
    let r = f(out.get("final_ratio").unwrap());
    o.check(
        within(r, 1.0, 1e-3),
        format!("final quotient ratio {r:.8} within 1e-3 of 1"),
    );
    if let Some(mu) = out.get("da_mu") {
        o.lines.push(format!(
            "    [info] approximant growth of the quotient mu = {:.6}",
            f(mu)
        ));
    }
    o
}

/// Cycle counts: an OEIS b-file `a140517.txt` in `data/` when present
/// (offset matched against `P_1 = 1, P_2 = 13`), otherwise the locally
/// computed terms.
fn cycles() -> (Series, &'static str) {
    let oeis = data("a140517.txt");
    if oeis.exists() {
        let b = read_bfile(&oeis).unwrap();
        let first = b.entries.iter().position(|(_, v)| *v == 1).unwrap();
        assert_eq!(b.entries[first + 1].1, 13, "unexpected A140517 layout");
        let shift = 1 - b.entries[first].0;
        let s = b.to_series("cycles", shift).unwrap();
        return (drop_below_one(s), "OEIS b-file");
    }
    let b = read_bfile(&data("cycles_tm.b")).unwrap();
    (b.to_series("cycles", 0).unwrap(), "transfer-matrix terms")
}

fn drop_below_one(s: Series) -> Series {
    let mut out = Series::new(s.name.clone());
    for t in s.terms().iter().filter(|t| t.index >= 1) {
        out.push(t.clone()).unwrap();
    }
    out
}

fn criterion_8() -> (Outcome, bool) {
    let mut o = Outcome::new();
    let (s, source) = cycles();
    let n = s.exact_count();
    o.check(
        n >= 26,
        format!("{n} exact cycle terms from {source} (26 required)"),
    );
    let opts = PipelineOptions::new(prec());
    let rr = ratio_fits(&s, &opts).unwrap();
    let c0 = f(rr.get("lambda2_cubic").unwrap());
    let g = f(rr.get("g_cubic").unwrap());
    o.check(
        within(c0, 3.043456, 2e-3),
        format!("cubic intercept {c0:.6} vs 3.043456 +- 2e-3"),
    );
    o.check(
        within(g, -0.5, 0.01),
        format!("g = {g:.4} vs -0.50 +- 0.01 (cubic fit, -g lambda^2 intercept)"),
    );
    let mut amp_opts = opts.clone();
    amp_opts.g = Some(prec().float(-0.5));
    let d = d_pipeline(&s, &amp_opts).unwrap();
    let lc = f(d.get("lambda_c").unwrap());
    o.check(
        within(lc, 2.690, 5e-3),
        format!("lambda^c = {lc:.5} vs 2.690 +- 0.005 (alpha = 0.97606, g = -1/2)"),
    );

    let cfg = EnsembleConfig {
        precision: prec(),
        ..EnsembleConfig::default()
    };
    match series_extend(&s, 20, &cfg) {
        Ok(ext) => {
            let rr = ratio_fits(&ext.series, &opts).unwrap();
            let c0 = f(rr.get("lambda2_cubic").unwrap());
            o.check(
                within(c0, 3.043456, 5e-4),
                format!("extended (+20) cubic intercept {c0:.6} vs 3.043456 +- 5e-4"),
            );
        }
        Err(e) => o.check(false, format!("extension failed: {e}")),
    }
    (o, n < 26)
}

fn closed_form(name: &str, terms: usize, coeff: impl Fn(u32) -> BigCount) -> (Series, BigCount) {
    let s = Series::from_integers(name, 0, (0..terms as u32).map(&coeff));
    (s, coeff(terms as u32))
}

fn binomial(n: u32, k: u32) -> BigCount {
    BigCount::from(BigCount::binomial_u(n, k))
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let p = prec();
    let t1 = table1();
    let train = t1.truncated(14);
    let cfg = EnsembleConfig {
        precision: p,
        ..EnsembleConfig::default()
    };
    let ext = series_extend(&train, 1, &cfg).unwrap();
    let (_, mean, spread) = &ext.estimates[0];
    let exact = t1.get(15).unwrap().value.to_float(p).unwrap();
    let rel = f(&((mean.clone() - &exact) / &exact).abs());
    o.check(
        rel <= 1e-4,
        format!(
            "L<=14 -> L=15 relative error {rel:.2e} (spread {:.1e})",
            f(&(spread.clone() / &exact))
        ),
    );

    let coeffs = EnsembleConfig {
        mode: ExtendMode::Coefficients,
        orders: vec![1, 2, 3],
        ..cfg.clone()
    };
    // (1-x)^(-3/2) rescaled to x -> 4x so the coefficients are integers
    let battery = [
        closed_form("(1-4x)^(-3/2)", 15, |n| binomial(2 * n, n) * (2 * n + 1)),
        closed_form("1/(1-2x)", 15, |n| BigCount::from(2).pow(n)),
        closed_form("(1-4x)^(-1/2)", 15, |n| binomial(2 * n, n)),
        closed_form("catalan", 15, |n| binomial(2 * n, n) / (n + 1)),
        closed_form("motzkin", 20, motzkin),
    ];
    for (s, next) in battery {
        match series_extend(&s, 1, &coeffs) {
            Ok(ext) => {
                let want = p.float(&next);
                let rel = f(&((ext.estimates[0].1.clone() - &want) / &want).abs());
                o.check(
                    rel <= 1e-8,
                    format!("{}: first predicted term relative error {rel:.2e}", s.name),
                );
            }
            Err(e) => o.check(false, format!("{}: {e}", s.name)),
        }
    }
    o
}

fn motzkin(n: u32) -> BigCount {
    let mut m = vec![BigCount::from(1), BigCount::from(1)];
    for k in 2..=n as usize {
        let v = (BigCount::from(2 * k + 1) * &m[k - 1] + BigCount::from(3 * k - 3) * &m[k - 2])
            / (k as u32 + 2);
        m.push(v);
    }
    m[n as usize].clone()
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    for side in 1..=3 {
        for c in inequality_chain(side).unwrap() {
            o.check(c.passed, format!("{}: {}", c.name, c.detail));
        }
        let counts = ChainCounts::compute(side).unwrap();
        o.lines.push(format!(
            "    [info] without single-vertex walks: M^ <= A is {} at L={side}",
            counts.m_hat <= counts.a
        ));
    }
    for side in 1..=3 {
        for c in move_claims(side).unwrap() {
            if side == 3 && c.name.starts_with("extension") {
                continue;
            }
            o.check(c.passed, format!("{}: {}", c.name, c.detail));
        }
    }
    timed(o, start, Duration::from_secs(300))
}

fn criterion_11(table: &RectTable) -> Outcome {
    let mut o = Outcome::new();
    let t1 = table1();
    let approx = t1
        .terms()
        .iter()
        .filter(|t| t.provenance == Provenance::Approximate)
        .count();
    o.check(
        t1.exact_count() == 17 && approx == 14,
        "published coefficients ingested: 17 exact, 14 approximate",
    );
    let digits_kept =
        t1.terms()[17].value.to_string() == "4.599082462168733357770670517895290353950e82";
    o.check(digits_kept, "approximate rows keep all 40 source digits");
    let computed = table.max_side().unwrap();
    o.check(
        (1..=computed).all(|l| table.assemble(l).unwrap().to_string() == t1.get(l).unwrap().value.to_string()),
        format!("exact terms reproduced locally through L={computed}; L=11..17 taken from the ingested table"),
    );
    let d = d_pipeline(&t1, &PipelineOptions::new(prec())).unwrap();
    o.lines.push(format!(
        "    [info] local estimates b = {:.5}, c = {:.3}, g = {:.3} (published b = -0.04354, c = -1.35 +- 0.45, g = 3.9 +- 0.1)",
        f(d.get("b").unwrap()),
        f(d.get("c").unwrap()),
        f(d.get("g").unwrap()),
    ));
    o
}

fn report(n: u32, o: &Outcome, expected_red: Option<&str>) -> bool {
    let status = match (o.pass, expected_red) {
        (true, _) => "PASS".to_string(),
        (false, Some(why)) => format!("FAIL (expected: {why})"),
        (false, None) => "FAIL".to_string(),
    };
    println!("criterion {n:>2}: {status}");
    for l in &o.lines {
        println!("{l}");
    }
    o.pass || expected_red.is_some()
}

fn main() {
    let mut ok = true;
    ok &= report(1, &criterion_1(), None);
    let start = Instant::now();
    let table = RectTable::compute(10, SweepKind::Walks).unwrap();
    let elapsed = start.elapsed();
    ok &= report(2, &criterion_2(&table, elapsed), None);
    ok &= report(3, &criterion_3(&table), None);
    ok &= report(4, &criterion_4(), None);
    ok &= report(5, &criterion_5(), None);
    ok &= report(6, &criterion_6(), None);
    ok &= report(7, &criterion_7(), None);
    let (c8, short) = criterion_8();
    ok &= report(
        8,
        &c8,
        short.then_some("fewer than 26 cycle terms available offline"),
    );
    ok &= report(9, &criterion_9(), None);
    ok &= report(10, &criterion_10(), None);
    ok &= report(11, &criterion_11(&table), None);
    if !ok {
        std::process::exit(1);
    }
}
