mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::*;
use softedge::edge::asymptotics::{asymptote, AsymptoteKind};
use softedge::edge::densities::{edge_density, shifted_wigner, wigner};
use softedge::edge::painleve::EdgeTable;
use softedge::edge::scaling::{p_typ_conditional, p_typ_exact, rho_edge_conditional, rho_edge_exact};
use softedge::estimators::{
    compare_curves, edge_to_raw, rescale_bulk, rescale_edge, small_n_oracle, unscaled, ConditionWindow, Curve,
    Histogram, Observable, OracleObservable, Reference,
};
use softedge::sampler::EnsembleSpec;
use softedge::simulation::{run, RunPlan, SolverPath};

const OUTPUT_DIR_VAR: &str = "SOFTEDGE_OUTPUT_DIR";

/// Failures that map to exit code 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(&a).map(|_| true),
        Command::Exact(a) => exact(&a).map(|_| true),
        Command::Compare(a) => compare(&a),
        Command::Oracle(a) => oracle(&a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Explicit path, else `$SOFTEDGE_OUTPUT_DIR/<default_name>`, else the
/// default name in the working directory.
fn resolve_output(explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p.clone();
    }
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) => Path::new(&dir).join(default_name),
        None => PathBuf::from(default_name),
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Failure(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn sidecar_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn observable(o: ObservableArg) -> Observable {
    match o {
        ObservableArg::Dos => Observable::Dos,
        ObservableArg::Gap => Observable::Gap,
        ObservableArg::Density => Observable::Density,
    }
}

/// Default histogram range in the units of the chosen rescaling.
fn default_range(o: ObservableArg, r: Rescaling, n: usize) -> (f64, f64) {
    let edge = (2.0 * n as f64).sqrt();
    match (o, r) {
        (_, Rescaling::Edge) => (0.0, 6.0),
        (ObservableArg::Dos, Rescaling::Bulk) => (0.0, 2.0 * std::f64::consts::SQRT_2),
        (ObservableArg::Dos, Rescaling::None) => (0.0, 2.0 * edge),
        (ObservableArg::Gap, _) => (0.0, edge_to_raw(6.0, n)),
        (ObservableArg::Density, _) => (-edge - 2.0, edge + 2.0),
    }
}

/// Rescaled histogram coordinate back to the raw eigenvalue scale.
fn to_raw(value: f64, r: Rescaling, n: usize) -> f64 {
    match r {
        Rescaling::None => value,
        Rescaling::Bulk => value * (n as f64).sqrt(),
        Rescaling::Edge => edge_to_raw(value, n),
    }
}

fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let spec = EnsembleSpec::new(a.beta, a.n, a.seed)?;
    let obs = observable(a.observable);
    if a.rescaling == Rescaling::Bulk && obs != Observable::Dos {
        return Err(Failure("bulk rescaling applies to --observable dos".into()));
    }
    if a.rescaling == Rescaling::Edge && obs == Observable::Density {
        return Err(Failure("edge rescaling applies to --observable dos or gap".into()));
    }
    let (lo_default, hi_default) = default_range(a.observable, a.rescaling, a.n);
    let lo = to_raw(a.lo.unwrap_or(lo_default), a.rescaling, a.n);
    let hi = to_raw(a.hi.unwrap_or(hi_default), a.rescaling, a.n);
    let histogram = Histogram::new(obs, a.n, lo, hi, a.bins)?;
    let window = a.window.map(|eps| ConditionWindow::at_edge(a.n, eps)).transpose()?;
    // the Sturm DOS path bins from zero; elsewhere fall back to the full solver
    let solver = match a.solver {
        Some(SolverArg::Full) => SolverPath::Full,
        Some(SolverArg::TopTwo) => SolverPath::TopTwo,
        None if window.is_some() && obs == Observable::Gap => SolverPath::TopTwo,
        None if window.is_some() && obs == Observable::Dos && lo == 0.0 => SolverPath::TopTwo,
        None => SolverPath::Full,
    };
    let plan = RunPlan { spec, samples: a.samples, workers: a.workers, histograms: vec![histogram], window, solver };
    let out = run(&plan)?;
    let h = &out.histograms[0];
    if out.accepted == 0 {
        eprintln!("warning: no sample fell inside the window");
    }
    let curve = match a.rescaling {
        Rescaling::None => unscaled(h),
        Rescaling::Bulk => rescale_bulk(h, a.n)?,
        Rescaling::Edge => rescale_edge(h, a.n)?,
    };
    let name = format!("{}_beta{}_n{}_seed{}.csv", obs.name(), a.beta, a.n, a.seed);
    let path = resolve_output(&a.output, &name);
    write_text(&path, &curve.to_csv())?;
    let meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "argv": std::env::args().collect::<Vec<_>>(),
        "config": a,
        "solver": solver,
        "lo_raw": lo,
        "hi_raw": hi,
        "samples": out.samples,
        "accepted": out.accepted,
        "events": h.n_events,
        "out_of_range_fraction": h.out_of_range_fraction(),
    });
    write_text(&sidecar_path(&path), &serde_json::to_string_pretty(&meta)?)?;
    eprintln!("wrote {} ({} of {} samples accepted)", path.display(), out.accepted, out.samples);
    Ok(())
}

fn asymptote_kind(f: ExactFunction) -> Option<AsymptoteKind> {
    Some(match f {
        ExactFunction::EdgeDensityLeft => AsymptoteKind::EdgeDensityLeft,
        ExactFunction::EdgeDensityRight => AsymptoteKind::EdgeDensityRight,
        ExactFunction::DosSmall => AsymptoteKind::DosSmall,
        ExactFunction::DosLarge => AsymptoteKind::DosLarge,
        ExactFunction::GapSmall => AsymptoteKind::GapSmall,
        ExactFunction::GapLargeLeading => AsymptoteKind::GapLargeLeading,
        ExactFunction::GapLargeFull => AsymptoteKind::GapLargeFull,
        _ => return None,
    })
}

fn default_grid(f: ExactFunction) -> (f64, f64) {
    use ExactFunction::*;
    match f {
        RhoEdge | PTyp | RhoEdgeConditional | PTypConditional => (0.0, 6.0),
        EdgeDensity | TracyWidom => (-8.0, 6.0),
        Wigner => (-1.5, 1.5),
        ShiftedWigner => (0.0, 3.0),
        F2Table => (-12.0, 10.0),
        EdgeDensityLeft => (-10.0, -1.0),
        EdgeDensityRight => (1.0, 8.0),
        DosSmall | GapSmall => (0.0, 1.0),
        DosLarge | GapLargeLeading | GapLargeFull => (1.0, 6.0),
    }
}

fn needs_table(f: ExactFunction) -> bool {
    use ExactFunction::*;
    matches!(f, RhoEdge | PTyp | RhoEdgeConditional | PTypConditional | TracyWidom | F2Table)
}

fn f2_table_csv(t: &EdgeTable, lo: f64, hi: f64, points: usize) -> CliResult<String> {
    use std::fmt::Write;
    let lo = lo.max(t.x_min());
    let hi = hi.min(t.x_max());
    if !(hi > lo) || points < 2 {
        return Err(Failure(format!("empty table range [{lo}, {hi}] or too few points")));
    }
    let mut out = String::from("x,q,q_prime,R,I,F2\n");
    for k in 0..points {
        let x = lo + (hi - lo) * k as f64 / (points - 1) as f64;
        let i_val = interpolate_grid(t, &t.i, x);
        writeln!(
            out,
            "{x:e},{:e},{:e},{:e},{:e},{:e}",
            t.q_at(x)?,
            t.q_prime_at(x)?,
            t.r_at(x)?,
            i_val,
            t.f2_at(x)?
        )?;
    }
    Ok(out)
}

/// Linear interpolation of a tabulated column; the table carries no
/// dedicated accessor for I(x).
fn interpolate_grid(t: &EdgeTable, column: &[f64], x: f64) -> f64 {
    let u = ((x - t.x_min()) / t.step).clamp(0.0, (t.len() - 1) as f64);
    let k = (u.floor() as usize).min(t.len() - 2);
    let w = u - k as f64;
    column[k] * (1.0 - w) + column[k + 1] * w
}

fn exact(a: &ExactArgs) -> CliResult<()> {
    let (lo_default, hi_default) = default_grid(a.function);
    let lo = a.min.unwrap_or(lo_default);
    let hi = a.max.unwrap_or(hi_default);
    let table = if needs_table(a.function) { Some(EdgeTable::build_default()?) } else { None };
    let name = format!("{}.csv", serde_json::to_value(a.function)?.as_str().unwrap_or("exact"));
    let path = resolve_output(&a.output, &name);

    let text = if a.function == ExactFunction::F2Table {
        f2_table_csv(table.as_ref().expect("table built"), lo, hi, a.points)?
    } else {
        let curve = Curve::tabulate(lo, hi, a.points, |x| {
            let t = table.as_ref();
            match a.function {
                ExactFunction::RhoEdge => rho_edge_exact(x, t.expect("table")),
                ExactFunction::PTyp => p_typ_exact(x, t.expect("table")),
                ExactFunction::RhoEdgeConditional => rho_edge_conditional(x, a.x, t.expect("table")),
                ExactFunction::PTypConditional => p_typ_conditional(x, a.x, t.expect("table")),
                ExactFunction::TracyWidom => {
                    let t = t.expect("table");
                    if x <= t.x_min() || x >= t.x_max() {
                        Ok(0.0)
                    } else {
                        t.f2_density_at(x)
                    }
                }
                ExactFunction::EdgeDensity => edge_density(a.beta, x),
                ExactFunction::Wigner => Ok(wigner(x)),
                ExactFunction::ShiftedWigner => Ok(shifted_wigner(x)),
                f => asymptote(asymptote_kind(f).expect("asymptotic form"), a.beta, x),
            }
        })?;
        curve.to_csv()
    };
    write_text(&path, &text)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn read_curve(path: &Path) -> CliResult<Curve> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Curve::from_csv(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn compare(a: &CompareArgs) -> CliResult<bool> {
    let curve = read_curve(&a.curve)?;
    let reference = read_curve(&a.reference)?;
    let m = compare_curves(&curve, &Reference::Curve(&reference), a.lo, a.hi)?;
    let checks = [("sup", m.sup, a.max_sup), ("l2", m.l2, a.max_l2), ("chi2_per_bin", m.chi2_per_bin, a.max_chi2)];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, v, limit)| limit.is_some_and(|l| !(*v <= l)))
        .map(|(name, _, _)| *name)
        .collect();
    let report = json!({
        "metrics": m,
        "thresholds": { "sup": a.max_sup, "l2": a.max_l2, "chi2_per_bin": a.max_chi2 },
        "failed": failed,
        "pass": failed.is_empty(),
    });
    let text = serde_json::to_string_pretty(&report)?;
    match &a.output {
        Some(p) => write_text(p, &text)?,
        None => println!("{text}"),
    }
    Ok(failed.is_empty())
}

fn oracle(a: &OracleArgs) -> CliResult<()> {
    let obs = match a.observable {
        OracleObservableArg::Gap => OracleObservable::Gap,
        OracleObservableArg::Dos => OracleObservable::Dos,
        OracleObservableArg::LambdaMax => OracleObservable::LambdaMax,
    };
    let curve = small_n_oracle(a.beta, a.n, obs, a.points)?;
    let name = format!("oracle_{}_beta{}_n{}.csv", serde_json::to_value(obs)?.as_str().unwrap_or("oracle"), a.beta, a.n);
    let path = resolve_output(&a.output, &name);
    write_text(&path, &curve.to_csv())?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
