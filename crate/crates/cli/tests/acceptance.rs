//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report reads top to bottom.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use bsmaj::beamsplitter::{spectrum, witness_residual};
use bsmaj::birkhoff::{apply, birkhoff_decompose, DoublyStochasticMatrix};
use bsmaj::catalysis::{catalyst_spectrum, check_catalysis_with_tail, CatalystSpec};
use bsmaj::entropy::{entropy_curve, renyi, theta_grid, RenyiOrder};
use bsmaj::locc::{build_kraus, run_protocol, verify_nielsen};
use bsmaj::majorization::{compare, random_majorized};
use bsmaj::regions::{
    accumulation_derivatives_in, find_crossovers, infinitesimal_verdict_in, region1_closed_form,
    InfinitesimalVerdict,
};
use bsmaj::vectors::{sorted_prefix_sums, ProbVector};
use bsmaj::Relation;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn bsmaj(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_bsmaj"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let (text, code) = bsmaj(args);
    ensure!(code == 0, "`{}` exited with {code}", args.join(" "));
    serde_json::from_str(&text).map_err(|e| format!("`{}`: {e}", args.join(" ")))
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn incomparable_pair() -> (ProbVector<f64>, ProbVector<f64>) {
    (spectrum(3, 0.72).unwrap(), spectrum(3, 0.62).unwrap())
}

fn c1_reference_numbers() -> Outcome {
    let cases: [(&str, [f64; 4]); 2] = [
        ("0.62", [0.44439, 0.290641, 0.226491, 0.0384782]),
        ("0.72", [0.416698, 0.320544, 0.180565, 0.0821927]),
    ];
    for (theta, expected) in cases {
        let v = cli_json(&["spectrum", "--k", "3", "--theta", theta, "--sorted"])?;
        let got: Vec<f64> =
            serde_json::from_value(v["results"].clone()).map_err(|e| e.to_string())?;
        ensure!(close(&got, &expected, 1e-5), "theta={theta}: {got:?}");
    }
    let c = catalyst_spectrum(&CatalystSpec::SinglePhoton { theta_c: 0.7 })
        .map_err(|e| e.to_string())?;
    ensure!(
        close(c.spectrum.as_slice(), &[0.584984, 0.415016], 1e-5),
        "C(0.7) = {:?}",
        c.spectrum
    );
    Ok("both spectra and C(0.7) within 1e-5".into())
}

fn c2_catalysis() -> Outcome {
    let start = Instant::now();
    let (p, q) = incomparable_pair();
    ensure!(
        compare(&p, &q).relation == Relation::Incomparable,
        "pair not incomparable"
    );
    let mut dims = Vec::new();
    for c in [
        CatalystSpec::SinglePhoton { theta_c: 0.7 },
        CatalystSpec::Tmsv {
            r: 1.38,
            truncation_dim: None,
        },
    ] {
        let rep = check_catalysis_with_tail(&p, &q, &c, 1e-12).map_err(|e| e.to_string())?;
        ensure!(
            rep.catalyzes(),
            "{c:?}: with={:?} marginal={}",
            rep.verdict_with.relation,
            rep.marginal
        );
        dims.push(rep.catalyst_dim);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    let v = cli_json(&[
        "catalysis",
        "check",
        "--p",
        "bs:3,0.72",
        "--q",
        "bs:3,0.62",
        "--catalyst",
        "single-photon:0.7",
    ])?;
    ensure!(
        v["results"]["without"] == "Incomparable" && v["results"]["with"] == "MajorizedBy",
        "cli verdicts {} / {}",
        v["results"]["without"],
        v["results"]["with"]
    );
    Ok(format!("catalyst dims {dims:?}, {elapsed:.2?}"))
}

fn c3_photon_chain() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=50 {
        let theta = FRAC_PI_2 * i as f64 / 51.0;
        for k in 0..=30 {
            let rel = compare(
                &spectrum(k + 1, theta).unwrap(),
                &spectrum(k, theta).unwrap(),
            )
            .relation;
            ensure!(rel == Relation::MajorizedBy, "k={k} theta={theta}: {rel}");
            let r = witness_residual(k, theta).map_err(|e| e.to_string())?;
            ensure!(r <= 1e-12, "witness residual {r} at k={k} theta={theta}");
            worst = worst.max(r);
        }
    }
    Ok(format!("1550 links, worst witness residual {worst:.1e}"))
}

fn c4_region_one() -> Outcome {
    let (mut worst_closed, mut worst_fd): (f64, f64) = (0.0, 0.0);
    let h = 1e-6;
    for k in 1..=20 {
        let part = find_crossovers::<f64>(k).unwrap();
        let (_, hi) = part.bounds(0);
        for i in 0..100 {
            let theta = hi * (i + 1) as f64 / 101.0;
            let a = accumulation_derivatives_in(&part, theta)
                .map_err(|e| e.to_string())?
                .values;
            let up = sorted_prefix_sums(&spectrum(k, theta + h).unwrap());
            let dn = sorted_prefix_sums(&spectrum(k, theta - h).unwrap());
            for j in 0..k {
                ensure!(a[j] <= 0.0, "a_{j} = {} > 0 at k={k} theta={theta}", a[j]);
                let c = region1_closed_form(k, j, theta).map_err(|e| e.to_string())?;
                let fd = (up[j] - dn[j]) / (2.0 * h);
                worst_closed = worst_closed.max((a[j] - c).abs());
                worst_fd = worst_fd.max((a[j] - fd).abs());
            }
        }
    }
    ensure!(worst_closed <= 1e-10, "closed form off by {worst_closed:e}");
    ensure!(worst_fd <= 1e-7, "finite differences off by {worst_fd:e}");
    Ok(format!(
        "closed form {worst_closed:.1e}, finite difference {worst_fd:.1e}"
    ))
}

fn c5_crossovers() -> Outcome {
    let two = find_crossovers::<f64>(2).unwrap();
    let expect2 = [(1.0 / 2f64.sqrt()).atan()];
    ensure!(
        close(&two.crossovers, &expect2, 1e-12),
        "k=2: {:?}",
        two.crossovers
    );
    let three = find_crossovers::<f64>(3).unwrap();
    let expect3 = [(1.0 / 3f64.sqrt()).atan(), 3f64.powf(-0.25).atan()];
    ensure!(
        close(&three.crossovers, &expect3, 1e-12),
        "k=3: {:?}",
        three.crossovers
    );
    let mut worst: f64 = 0.0;
    for part in [&two, &three] {
        for (c, pairs) in part.crossovers.iter().zip(&part.pairs) {
            let p = spectrum(part.k, *c).unwrap();
            for &(n, m) in pairs {
                worst = worst.max((p[n] - p[m]).abs());
            }
        }
    }
    ensure!(worst <= 1e-12, "eigenvalue pair differs by {worst:e}");
    Ok(format!(
        "k=3: {:.16}, {:.16}; pair gap {worst:.1e}",
        three.crossovers[0], three.crossovers[1]
    ))
}

fn c6_violations() -> Outcome {
    let two = find_crossovers::<f64>(2).unwrap();
    let t1 = two.crossovers[0];
    let n = 200;
    for i in 0..n {
        let theta = t1 + (FRAC_PI_4 - t1) * (i as f64 + 0.5) / n as f64;
        let a = accumulation_derivatives_in(&two, theta)
            .map_err(|e| e.to_string())?
            .values;
        ensure!(a[0] > 0.0, "k=2 a_0 = {} at {theta}", a[0]);
    }

    let three = find_crossovers::<f64>(3).unwrap();
    let (t1, t2) = (three.crossovers[0], three.crossovers[1]);
    let positive_from = |lo: f64, hi: f64| -> Result<Vec<usize>, String> {
        let mut js = Vec::new();
        for i in 0..n {
            let theta = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            match infinitesimal_verdict_in(&three, theta)
                .map_err(|e| e.to_string())?
                .verdict
            {
                InfinitesimalVerdict::Violated { j } => js.push(j),
                v => return Err(format!("{v:?} at theta={theta}")),
            }
        }
        js.sort_unstable();
        js.dedup();
        Ok(js)
    };
    let region3 = positive_from(t2, FRAC_PI_4)?;
    let region2 = positive_from(t1, (1.0 / 2f64.sqrt()).atan())?;
    Ok(format!(
        "k=2 a_0 > 0 on region 2; k=3 violated on region 3 via a_{region3:?} and on [t1, atan(1/sqrt2)) via a_{region2:?}"
    ))
}

fn c7_locc() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=30 {
        let defect = build_kraus::<f64>(k).completeness_defect();
        ensure!(defect <= 1e-15, "completeness defect {defect:e} at k={k}");
        for i in 0..20 {
            let theta = FRAC_PI_2 * i as f64 / 19.0;
            let (b1, b2) = run_protocol(k, theta).map_err(|e| e.to_string())?;
            let (s, c) = theta.sin_cos();
            let target = spectrum(k, theta).unwrap();
            let errs = [
                (b1.probability - s * s).abs(),
                (b2.probability - c * c).abs(),
                b1.post_spectrum.max_abs_diff(&target).unwrap(),
                b2.post_spectrum.max_abs_diff(&target).unwrap(),
            ];
            let e = errs.iter().copied().fold(0.0, f64::max);
            ensure!(e <= 1e-12, "k={k} theta={theta}: error {e:e}");
            ensure!(
                verify_nielsen(k, theta).map_err(|e| e.to_string())?,
                "nielsen fails at k={k} theta={theta}"
            );
            worst = worst.max(e);
        }
    }
    Ok(format!("620 runs, worst error {worst:.1e}"))
}

fn c8_entropy_shapes() -> Outcome {
    let grid = theta_grid(0.0, FRAC_PI_4, 500).unwrap();
    let s1 = RenyiOrder::shannon();
    let sinf = RenyiOrder::min_entropy();
    let two = entropy_curve(2, &[s1, sinf], &grid).unwrap();
    let shannon = two.column(0);
    ensure!(
        shannon.windows(2).all(|w| w[1] > w[0]),
        "k=2 S_1 not strictly increasing"
    );
    let t1 = find_crossovers::<f64>(2).unwrap().crossovers[0];
    let minent = two.column(1);
    let after = grid.iter().position(|&t| t > t1).unwrap();
    ensure!(
        minent[after + 1] < minent[after],
        "k=2 S_inf not decreasing right of crossover"
    );
    ensure!(
        minent[after - 1] > minent[after - 2],
        "k=2 S_inf not increasing left of crossover"
    );

    let part = find_crossovers::<f64>(3).unwrap();
    let (a, b) = (part.crossovers[0], part.crossovers[1]);
    let s = entropy_curve(3, &[sinf], &grid).unwrap().column(0);
    let minima: Vec<f64> = (1..grid.len() - 1)
        .filter(|&i| s[i] < s[i - 1] && s[i] < s[i + 1])
        .map(|i| grid[i])
        .collect();
    ensure!(
        minima.iter().any(|&m| m > a && m < b),
        "k=3 S_inf minima {minima:?}"
    );
    Ok(format!("k=3 S_inf local minimum at {:.6}", minima[0]))
}

fn random_prob(rng: &mut ChaCha8Rng, d: usize) -> ProbVector<f64> {
    let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
    let s: f64 = v.iter().sum();
    ProbVector::new(v.into_iter().map(|x| x / s).collect()).unwrap()
}

fn c9_property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let alphas: Vec<RenyiOrder<f64>> = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, f64::INFINITY]
        .into_iter()
        .map(|a| RenyiOrder::new(a).unwrap())
        .collect();
    let mut violations = 0;
    for i in 0..1000 {
        let d = rng.gen_range(1..=10);
        let q = random_prob(&mut rng, d);
        let p = random_majorized(&q, rng.gen_range(1..=6), i);
        if !compare(&p, &q).relation.is_majorized_by() {
            violations += 1;
        }
        violations += alphas
            .iter()
            .filter(|&&o| renyi(&p, o) < renyi(&q, o) - 1e-12)
            .count();
    }
    ensure!(violations == 0, "{violations} Schur-concavity violations");

    let (mut worst, mut forward_fail) = (0.0f64, 0);
    for _ in 0..200 {
        let d = rng.gen_range(1..=12);
        let terms = rng.gen_range(1..=2 * d);
        let w: Vec<f64> = (0..terms).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let s: f64 = w.iter().sum();
        let w: Vec<f64> = w.into_iter().map(|x| x / s).collect();
        let perms: Vec<Vec<usize>> = (0..terms)
            .map(|_| {
                let mut p: Vec<usize> = (0..d).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let m = DoublyStochasticMatrix::from_permutation_mixture(&w, &perms)
            .map_err(|e| e.to_string())?;
        let dec = birkhoff_decompose(&m).map_err(|e| e.to_string())?;
        ensure!(
            dec.len() <= (d - 1) * (d - 1) + 1,
            "{} terms for d={d}",
            dec.len()
        );
        worst = worst.max(dec.reconstruction_error(&m));
        let q = random_prob(&mut rng, d);
        if !compare(&apply(&m, &q).unwrap(), &q)
            .relation
            .is_majorized_by()
        {
            forward_fail += 1;
        }
    }
    ensure!(worst < 1e-9, "reconstruction error {worst:e}");
    ensure!(forward_fail == 0, "{forward_fail} D.q not majorized by q");
    Ok(format!(
        "1000 pairs clean; 200 mixtures, worst reconstruction {worst:.1e}"
    ))
}

const SCRIPT: &[&[&str]] = &[
    &["spectrum", "--k", "3", "--theta", "0.62", "--sorted"],
    &["spectrum", "--k", "5", "--theta", "pi/4", "--out", "csv"],
    &["majorize", "--p", "bs:3,0.72", "--q", "bs:3,0.62"],
    &[
        "majorize",
        "--q",
        "0.5,0.3,0.2",
        "--random",
        "4",
        "--seed",
        "17",
    ],
    &["photon-chain", "--k-max", "6", "--theta", "0.62"],
    &["regions", "--k", "4"],
    &["infinitesimal", "--k", "3", "--theta", "0.7"],
    &["infinitesimal", "--k", "3", "--theta", "pi/6"],
    &[
        "entropy-curve",
        "--k",
        "2",
        "--alphas",
        "0.5,1,2,inf",
        "--steps",
        "25",
        "--out",
        "csv",
        "--bits",
    ],
    &["figure-data", "--figure", "fig4", "--steps", "50"],
    &[
        "figure-data",
        "--figure",
        "fig5",
        "--steps",
        "50",
        "--out",
        "json",
    ],
    &["locc-verify", "--k", "2", "--theta", "0.62"],
    &[
        "catalysis",
        "check",
        "--p",
        "bs:3,0.72",
        "--q",
        "bs:3,0.62",
        "--catalyst",
        "tmsv:1.38",
    ],
    &[
        "catalysis",
        "search",
        "--p",
        "bs:3,0.72",
        "--q",
        "bs:3,0.62",
        "--family",
        "single-photon",
        "--grid",
        "0.01",
        "--all",
    ],
    &["birkhoff", "--k", "2", "--theta", "0.5"],
    &["spectrum", "--k", "3", "--theta", "nope"],
];

fn run_script() -> Vec<u8> {
    let mut out = Vec::new();
    for args in SCRIPT {
        let (text, code) = bsmaj(args);
        out.extend_from_slice(format!("$ {} -> {code}\n", args.join(" ")).as_bytes());
        out.extend_from_slice(text.as_bytes());
    }
    out
}

fn c10_determinism() -> Outcome {
    let (a, b) = (run_script(), run_script());
    ensure!(a == b, "outputs differ between runs");
    Ok(format!(
        "{} commands, {} identical bytes",
        SCRIPT.len(),
        a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("reference spectra", c1_reference_numbers),
        ("incomparability and catalysis", c2_catalysis),
        ("photon-number chain", c3_photon_chain),
        ("region-1 monotonicity", c4_region_one),
        ("crossover angles", c5_crossovers),
        ("violation structure", c6_violations),
        ("LOCC protocol", c7_locc),
        ("entropy behavior", c8_entropy_shapes),
        ("property suites", c9_property_suites),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
