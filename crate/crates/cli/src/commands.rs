//! One function per subcommand; each returns the rendered payload.

use std::fs;
use std::process::ExitCode;

use serde::Serialize;

use bsmaj::beamsplitter::{sorted_spectrum, spectrum, witness_residual};
use bsmaj::birkhoff::{birkhoff_decompose_with_tol, bs_witness_matrix, DoublyStochasticMatrix};
use bsmaj::catalysis::{
    catalyst_success_set, check_catalysis_with_tail, necessary_conditions, search_catalyst,
    CatalystFamily, CatalystSpec, SearchGrid,
};
use bsmaj::entropy::{entropy_curve, parse_orders, theta_grid, EntropyTable, RenyiOrder};
use bsmaj::locc::{run_protocol, verify_nielsen};
use bsmaj::majorization::{compare, compare_with_tol, random_majorized};
use bsmaj::regions::{find_crossovers, infinitesimal_verdict, InfinitesimalVerdict};
use bsmaj::{Error, ProbVec, Relation, Verdict};

use crate::args::{CatalystArg, VecSource};
use crate::render::{fmt_float, join_floats, join_indices, to_json, OutputEnvelope, Table};
use crate::{
    BirkhoffArgs, CatalysisCommand, ChainArgs, CheckArgs, Cli, Command, CurveArgs, FamilyArg,
    Figure, FigureArgs, Format, MajorizeArgs, PointArgs, RegionsArgs, SearchArgs, SpectrumArgs,
};

#[derive(Debug)]
pub enum Failure {
    /// Malformed input: exit status 2.
    Usage(String),
    /// Well-formed input outside the mathematical domain: exit status 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<(String, ExitCode), Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(cli, a),
        Command::Majorize(a) => cmd_majorize(cli, a),
        Command::PhotonChain(a) => cmd_chain(cli, a),
        Command::Regions(a) => cmd_regions(cli, a),
        Command::Infinitesimal(a) => cmd_infinitesimal(cli, a),
        Command::EntropyCurve(a) => cmd_entropy_curve(cli, a),
        Command::FigureData(a) => cmd_figure(cli, a),
        Command::LoccVerify(a) => cmd_locc(cli, a),
        Command::Catalysis(CatalysisCommand::Check(a)) => cmd_catalysis_check(cli, a),
        Command::Catalysis(CatalysisCommand::Search(a)) => cmd_catalysis_search(cli, a),
        Command::Birkhoff(a) => cmd_birkhoff(cli, a),
    }
}

#[derive(Serialize)]
struct Params<'a, A: Serialize> {
    #[serde(flatten)]
    args: &'a A,
    tol: f64,
    seed: u64,
}

fn render<A: Serialize, R: Serialize>(
    cli: &Cli,
    command: &str,
    args: &A,
    results: &R,
    default: Format,
    table: impl FnOnce() -> Table,
) -> String {
    match cli.out.unwrap_or(default) {
        Format::Csv => table().render(),
        Format::Json => to_json(&OutputEnvelope {
            command: command.to_string(),
            params: Params {
                args,
                tol: cli.tol,
                seed: cli.seed,
            },
            results,
            tool_version: env!("CARGO_PKG_VERSION"),
        }),
    }
}

fn ok(text: String) -> Outcome {
    Ok((text, ExitCode::SUCCESS))
}

fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(src: &VecSource) -> Result<ProbVec, Failure> {
    Ok(match src {
        VecSource::Bs { k, theta } => spectrum(*k, *theta)?,
        VecSource::File(path) => ProbVec::parse(&read_file(path)?)?,
        VecSource::Literal(v) => ProbVec::new(v.clone())?,
    })
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "tolerance {tol} must be finite and nonnegative"
        )))
    }
}

fn vector_table(p: &ProbVec) -> Table {
    let mut t = Table::new(["p"]);
    for &x in p.iter() {
        t.push(vec![fmt_float(x)]);
    }
    t
}

fn gaps_table(v: &Verdict) -> Table {
    let mut t = Table::new(["prefix", "gap"]);
    for (i, &g) in v.partial_sum_gaps.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_float(g)]);
    }
    t.notes.push(("relation".into(), v.relation.to_string()));
    t
}

fn cmd_spectrum(cli: &Cli, a: &SpectrumArgs) -> Outcome {
    let p = if a.sorted {
        sorted_spectrum(a.k, a.theta)?
    } else {
        spectrum(a.k, a.theta)?
    };
    ok(render(cli, "spectrum", a, &p, Format::Json, || {
        vector_table(&p)
    }))
}

#[derive(Serialize)]
struct MajorizeResult {
    p: ProbVec,
    q: ProbVec,
    verdict: Verdict,
}

fn cmd_majorize(cli: &Cli, a: &MajorizeArgs) -> Outcome {
    check_tol(cli.tol)?;
    let q = load(&a.q)?;
    let p = match (&a.p, a.random) {
        (_, Some(0)) => {
            return Err(Failure::Domain(
                "--random needs at least one permutation".into(),
            ))
        }
        (_, Some(n)) => random_majorized(&q, n, cli.seed),
        (Some(src), None) => load(src)?,
        (None, None) => return Err(Failure::Usage("either --p or --random is required".into())),
    };
    let verdict = compare_with_tol(&p, &q, cli.tol);
    let res = MajorizeResult { p, q, verdict };
    ok(render(cli, "majorize", a, &res, Format::Json, || {
        gaps_table(&res.verdict)
    }))
}

#[derive(Serialize)]
struct ChainLink {
    k: usize,
    relation: Relation,
    witness_residual: f64,
    verdict: Verdict,
}

#[derive(Serialize)]
struct ChainResult {
    theta: f64,
    all_majorized: bool,
    links: Vec<ChainLink>,
}

fn cmd_chain(cli: &Cli, a: &ChainArgs) -> Outcome {
    check_tol(cli.tol)?;
    if a.k_max == 0 {
        return Err(Failure::Domain("k-max must be at least 1".into()));
    }
    let mut links = Vec::with_capacity(a.k_max);
    for k in 0..a.k_max {
        let verdict = compare_with_tol(&spectrum(k + 1, a.theta)?, &spectrum(k, a.theta)?, cli.tol);
        links.push(ChainLink {
            k,
            relation: verdict.relation,
            witness_residual: witness_residual(k, a.theta)?,
            verdict,
        });
    }
    let res = ChainResult {
        theta: a.theta,
        all_majorized: links.iter().all(|l| l.relation.is_majorized_by()),
        links,
    };
    ok(render(cli, "photon-chain", a, &res, Format::Json, || {
        let mut t = Table::new(["k", "relation", "min_gap", "witness_residual"]);
        for l in &res.links {
            t.push(vec![
                l.k.to_string(),
                l.relation.to_string(),
                fmt_float(l.verdict.min_gap()),
                fmt_float(l.witness_residual),
            ]);
        }
        t
    }))
}

fn cmd_regions(cli: &Cli, a: &RegionsArgs) -> Outcome {
    let part = find_crossovers::<f64>(a.k)?;
    ok(render(cli, "regions", a, &part, Format::Json, || {
        let mut t = Table::new(["region", "lower", "upper", "ordering"]);
        for r in 0..part.region_count() {
            let (lo, hi) = part.bounds(r);
            t.push(vec![
                (r + 1).to_string(),
                fmt_float(lo),
                fmt_float(hi),
                join_indices(&part.orderings[r]),
            ]);
        }
        t
    }))
}

fn cmd_infinitesimal(cli: &Cli, a: &PointArgs) -> Outcome {
    let rep = infinitesimal_verdict(a.k, a.theta)?;
    let text = render(cli, "infinitesimal", a, &rep, Format::Json, || {
        let mut t = Table::new(["j", "a_j"]);
        if let Some(d) = &rep.derivatives {
            for (j, &v) in d.values.iter().enumerate() {
                t.push(vec![j.to_string(), fmt_float(v)]);
            }
        }
        let verdict = match rep.verdict {
            InfinitesimalVerdict::Holds => "Holds".to_string(),
            InfinitesimalVerdict::Violated { j } => format!("Violated j={j}"),
            InfinitesimalVerdict::Boundary => "Boundary".to_string(),
        };
        t.notes.push(("verdict".into(), verdict));
        t
    });
    if rep.verdict == InfinitesimalVerdict::Boundary {
        eprintln!(
            "error: theta = {} is a region boundary; pick a side",
            a.theta
        );
        return Ok((text, ExitCode::from(1)));
    }
    ok(text)
}

#[derive(Serialize)]
struct CurveResult {
    units: &'static str,
    columns: Vec<String>,
    table: EntropyTable<f64>,
}

fn curve_table(res: &CurveResult) -> Table {
    let mut t = Table::new(res.columns.iter().cloned());
    for (theta, row) in res.table.theta.iter().zip(&res.table.values) {
        let mut cells = vec![fmt_float(*theta)];
        cells.extend(row.iter().map(|&v| fmt_float(v)));
        t.push(cells);
    }
    t
}

fn curve(
    k: usize,
    orders: &[RenyiOrder<f64>],
    grid: &[f64],
    bits: bool,
) -> Result<CurveResult, Failure> {
    let mut table = entropy_curve(k, orders, grid)?;
    if bits {
        table = table.into_bits();
    }
    let columns = std::iter::once("theta".to_string())
        .chain(orders.iter().map(|o| o.label()))
        .collect();
    Ok(CurveResult {
        units: if bits { "bits" } else { "nats" },
        columns,
        table,
    })
}

fn cmd_entropy_curve(cli: &Cli, a: &CurveArgs) -> Outcome {
    let orders = parse_orders::<f64>(&a.alphas)?;
    let grid = theta_grid(a.theta_min, a.theta_max, a.steps)?;
    let res = curve(a.k, &orders, &grid, a.bits)?;
    ok(render(cli, "entropy-curve", a, &res, Format::Json, || {
        curve_table(&res)
    }))
}

#[derive(Serialize)]
struct Annotations {
    crossovers: Vec<f64>,
    min_entropy_local_minima: Vec<f64>,
}

#[derive(Serialize)]
struct FigureResult {
    figure: Figure,
    k: usize,
    #[serde(flatten)]
    curve: CurveResult,
    annotations: Annotations,
}

fn cmd_figure(cli: &Cli, a: &FigureArgs) -> Outcome {
    let k = match a.figure {
        Figure::Fig4 => 2,
        Figure::Fig5 => 3,
    };
    let orders = parse_orders::<f64>("1,10,inf")?;
    let grid = theta_grid(0.0, std::f64::consts::FRAC_PI_4, a.steps)?;
    let curve = curve(k, &orders, &grid, a.bits)?;
    let s_inf = curve.table.column(2);
    let minima = (1..s_inf.len().saturating_sub(1))
        .filter(|&i| s_inf[i] < s_inf[i - 1] && s_inf[i] < s_inf[i + 1])
        .map(|i| grid[i])
        .collect();
    let res = FigureResult {
        figure: a.figure,
        k,
        annotations: Annotations {
            crossovers: find_crossovers::<f64>(k)?.crossovers,
            min_entropy_local_minima: minima,
        },
        curve,
    };
    ok(render(cli, "figure-data", a, &res, Format::Csv, || {
        let mut t = curve_table(&res.curve);
        for &c in &res.annotations.crossovers {
            t.notes.push(("crossover".into(), fmt_float(c)));
        }
        for &m in &res.annotations.min_entropy_local_minima {
            t.notes.push(("min_entropy_local_min".into(), fmt_float(m)));
        }
        t
    }))
}

#[derive(Serialize)]
struct LoccResult {
    k: usize,
    theta: f64,
    relation: Relation,
    nielsen_agrees: bool,
    branches: [bsmaj::locc::LoccOutcomeReport<f64>; 2],
}

fn cmd_locc(cli: &Cli, a: &PointArgs) -> Outcome {
    let (b1, b2) = run_protocol::<f64>(a.k, a.theta)?;
    let res = LoccResult {
        k: a.k,
        theta: a.theta,
        relation: compare(&spectrum(a.k + 1, a.theta)?, &spectrum(a.k, a.theta)?).relation,
        nielsen_agrees: verify_nielsen(a.k, a.theta)?,
        branches: [b1, b2],
    };
    ok(render(cli, "locc-verify", a, &res, Format::Json, || {
        let mut t = Table::new([
            "branch",
            "probability",
            "correction",
            "vacuous",
            "post_spectrum",
        ]);
        for b in &res.branches {
            t.push(vec![
                b.branch.to_string(),
                fmt_float(b.probability),
                format!("{:?}", b.bob_correction),
                b.vacuous.to_string(),
                join_floats(b.post_spectrum.as_slice()),
            ]);
        }
        t.notes
            .push(("nielsen_agrees".into(), res.nielsen_agrees.to_string()));
        t
    }))
}

fn catalyst_spec(arg: &CatalystArg) -> Result<CatalystSpec<f64>, Failure> {
    Ok(match arg {
        CatalystArg::SinglePhoton(theta_c) => CatalystSpec::SinglePhoton { theta_c: *theta_c },
        CatalystArg::Tmsv { r, truncation } => CatalystSpec::Tmsv {
            r: *r,
            truncation_dim: *truncation,
        },
        CatalystArg::File(path) => CatalystSpec::Explicit {
            spectrum: ProbVec::parse(&read_file(path)?)?,
        },
    })
}

#[derive(Serialize)]
struct CheckResult {
    without: Relation,
    with: Relation,
    catalyzes: bool,
    marginal: bool,
    catalyst_dim: usize,
    tail_mass: f64,
    report: bsmaj::catalysis::CatalysisReport<f64>,
}

fn cmd_catalysis_check(cli: &Cli, a: &CheckArgs) -> Outcome {
    if !(a.tail_tol > 0.0 && a.tail_tol < 1.0) {
        return Err(Failure::Domain(format!(
            "tail-tol {} must lie in (0, 1)",
            a.tail_tol
        )));
    }
    let (p, q) = (load(&a.p)?, load(&a.q)?);
    let report = check_catalysis_with_tail(&p, &q, &catalyst_spec(&a.catalyst)?, a.tail_tol)?;
    let res = CheckResult {
        without: report.verdict_without.relation,
        with: report.verdict_with.relation,
        catalyzes: report.catalyzes(),
        marginal: report.marginal,
        catalyst_dim: report.catalyst_dim,
        tail_mass: report.tail_mass,
        report,
    };
    ok(render(
        cli,
        "catalysis check",
        a,
        &res,
        Format::Json,
        || {
            let mut t = Table::new(["key", "value"]);
            for (k, v) in [
                ("without", res.without.to_string()),
                ("with", res.with.to_string()),
                ("catalyzes", res.catalyzes.to_string()),
                ("marginal", res.marginal.to_string()),
                ("catalyst_dim", res.catalyst_dim.to_string()),
                ("tail_mass", fmt_float(res.tail_mass)),
            ] {
                t.push(vec![k.to_string(), v]);
            }
            t
        },
    ))
}

#[derive(Serialize)]
struct SearchResult {
    relation_without: Relation,
    necessary_conditions: bool,
    hits: Vec<CatalystSpec<f64>>,
}

fn cmd_catalysis_search(cli: &Cli, a: &SearchArgs) -> Outcome {
    let (p, q) = (load(&a.p)?, load(&a.q)?);
    let family = match a.family {
        FamilyArg::SinglePhoton => CatalystFamily::SinglePhoton,
        FamilyArg::Tmsv => CatalystFamily::Tmsv,
    };
    if !(a.r_max > 0.0 && a.r_max.is_finite()) {
        return Err(Failure::Domain(format!(
            "r-max {} must be positive",
            a.r_max
        )));
    }
    let grid = SearchGrid {
        step: a.grid,
        r_max: a.r_max,
    };
    let hits = if a.all {
        catalyst_success_set(&p, &q, family, grid)?
    } else {
        search_catalyst(&p, &q, family, grid)?.into_iter().collect()
    };
    let res = SearchResult {
        relation_without: compare(&p, &q).relation,
        necessary_conditions: necessary_conditions(&p, &q),
        hits,
    };
    ok(render(
        cli,
        "catalysis search",
        a,
        &res,
        Format::Json,
        || {
            let mut t = Table::new(["family", "parameter"]);
            for c in &res.hits {
                t.push(match c {
                    CatalystSpec::SinglePhoton { theta_c } => {
                        vec!["single-photon".into(), fmt_float(*theta_c)]
                    }
                    CatalystSpec::Tmsv { r, .. } => vec!["tmsv".into(), fmt_float(*r)],
                    CatalystSpec::Explicit { spectrum } => {
                        vec!["explicit".into(), join_floats(spectrum.as_slice())]
                    }
                });
            }
            t
        },
    ))
}

#[derive(Serialize)]
struct BirkhoffResult {
    dim: usize,
    term_bound: usize,
    reconstruction_error: f64,
    matrix: DoublyStochasticMatrix<f64>,
    decomposition: bsmaj::Decomposition,
}

fn cmd_birkhoff(cli: &Cli, a: &BirkhoffArgs) -> Outcome {
    check_tol(cli.tol)?;
    let m = match (a.k, a.theta, &a.matrix) {
        (Some(k), Some(theta), _) => bs_witness_matrix(k, theta)?,
        (_, _, Some(text)) => {
            let raw = match text.strip_prefix("file:") {
                Some(path) => read_file(std::path::Path::new(path))?,
                None => text.clone(),
            };
            let rows: Vec<Vec<f64>> =
                serde_json::from_str(&raw).map_err(|e| Failure::Usage(format!("matrix: {e}")))?;
            DoublyStochasticMatrix::with_tol(rows, cli.tol.max(1e-12))?
        }
        _ => return Err(Failure::Usage("give --k with --theta, or --matrix".into())),
    };
    let decomposition = birkhoff_decompose_with_tol(&m, cli.tol)?;
    let d = m.dim();
    let res = BirkhoffResult {
        dim: d,
        term_bound: (d - 1) * (d - 1) + 1,
        reconstruction_error: decomposition.reconstruction_error(&m),
        matrix: m,
        decomposition,
    };
    ok(render(cli, "birkhoff", a, &res, Format::Json, || {
        let mut t = Table::new(["weight", "perm"]);
        for (w, p) in res
            .decomposition
            .weights
            .iter()
            .zip(&res.decomposition.perms)
        {
            t.push(vec![fmt_float(*w), join_indices(p)]);
        }
        t.notes.push((
            "reconstruction_error".into(),
            fmt_float(res.reconstruction_error),
        ));
        t
    }))
}
