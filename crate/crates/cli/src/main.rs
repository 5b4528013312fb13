use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use esd_core::dynamics::{evolve_xstate, Tau};
use esd_core::entanglement::{evolved_xstate_concurrence_raw, wootters_concurrence};
use esd_core::esd::{classify_nondiagonal, distances, DynamicalClass};
use esd_core::format::{fmt12, fmt_sig};
use esd_core::geometry::{grid_axis, sample_surface, surface_csv, Surface};
use esd_core::lindblad::{integrate_checkpoints, raw_concurrence_trajectory, uniform_grid, IntegratorConfig};
use esd_core::lorentz::{lorentz_normal_form, normalize_cone_point, NormalForm, NormalFormClass};
use esd_core::sdt::{sdt_closed_form, sdt_nondiagonal, NUMERIC_TAU_MAX};
use esd_core::state::in_tetrahedron;
use esd_core::verify::{self, Counts};
use esd_core::{BellPoint, ConePoint, Error, RMatrix, State};

const MAX_GRID: usize = 401;
/// Grid used to look for a zero of the original state's concurrence.
const ORIGINAL_SCAN_SAMPLES: usize = 6001;

#[derive(Parser)]
#[command(name = "esd", version, about = "Entanglement sudden death under amplitude damping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a point or state as Separable, ESD or EAD.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Concurrence trajectory on a uniform grid in tau = gamma t.
    Evolve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Integrate the master equation instead of using the closed form.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every grid point of the tetrahedron.
    Sweep {
        #[arg(long, default_value_t = 51)]
        grid: usize,
        /// Fix one coordinate, e.g. `x3=-0.5`.
        #[arg(long)]
        slice: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lorentz normal form of a state.
    NormalForm {
        #[command(flatten)]
        input: Input,
        /// Also classify the representative and test the original state.
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Seeded self-check suites.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Samples per suite instead of the full counts.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point cloud of a boundary surface.
    Surface {
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Bell point `x1,x2,x3`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Diagonal cone point `x0,x1,x2,x3`.
    #[arg(long, allow_hyphen_values = true)]
    cone: Option<String>,
    /// JSON state file.
    #[arg(long)]
    state: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("cannot parse '{s}': {e}")))?;
    if values.len() != n {
        return Err(Failure::Usage(format!("expected {n} comma-separated values, got {}", values.len())));
    }
    Ok(values)
}

enum Parsed {
    Point(BellPoint),
    Cone(ConePoint),
    State(Box<State>),
}

impl Input {
    fn parse(&self) -> Result<Parsed, Failure> {
        if let Some(p) = &self.point {
            let v = parse_list(p, 3)?;
            return Ok(Parsed::Point(BellPoint::new(v[0], v[1], v[2])?));
        }
        if let Some(c) = &self.cone {
            let v = parse_list(c, 4)?;
            return Ok(Parsed::Cone(ConePoint::new(v[0], v[1], v[2], v[3])?));
        }
        let path = self.state.as_ref().expect("one input is required");
        let text = fs::read_to_string(path)?;
        Ok(Parsed::State(Box::new(State::from_json(&text)?)))
    }
}

impl Parsed {
    fn to_state(&self) -> State {
        match self {
            Parsed::Point(p) => State::Bell(*p),
            Parsed::Cone(c) => State::X(c.to_xstate()),
            Parsed::State(s) => (**s).clone(),
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn opt_field(v: Option<f64>) -> String {
    v.map(fmt12).unwrap_or_default()
}

/// Fields describing the fate of a Bell point.
fn bell_fields(p: &BellPoint) -> (DynamicalClass, Option<f64>, [f64; 3]) {
    let sdt = sdt_closed_form(p);
    let d = distances(p);
    (sdt.class, sdt.tau_star, [d.d_p, d.d_1, d.d_2])
}

fn classify(input: &Input, as_json: bool) -> CmdResult {
    let parsed = input.parse()?;
    let bell = match &parsed {
        Parsed::Point(p) => Some(*p),
        Parsed::Cone(c) => Some(normalize_cone_point(c)?),
        Parsed::State(s) if let State::Bell(p) = **s => Some(p),
        Parsed::State(s) => {
            let nf = lorentz_normal_form(&s.to_rmatrix())?;
            match nf.class {
                NormalFormClass::Diagonal => Some(normalize_cone_point(&nf.cone_point().ok_or_else(|| {
                    Failure::Domain("diagonal representative outside the cone".into())
                })?)?),
                NormalFormClass::Apex => {
                    print_class(DynamicalClass::Separable, None, None, "apex", as_json);
                    return Ok(());
                }
                NormalFormClass::NonDiagonal => {
                    let class = classify_nondiagonal(nf.x0, nf.x1, nf.k)?;
                    let tau = sdt_nondiagonal(nf.x0, nf.x1, nf.k)?.tau_star;
                    print_class(class, tau, None, "nondiagonal", as_json);
                    return Ok(());
                }
            }
        }
    };
    let p = bell.expect("bell point");
    let (class, tau, d) = bell_fields(&p);
    let kind = if matches!(&parsed, Parsed::State(s) if !matches!(**s, State::Bell(_))) {
        "diagonal"
    } else {
        ""
    };
    print_class(class, tau, Some(d), kind, as_json);
    Ok(())
}

fn print_class(class: DynamicalClass, tau: Option<f64>, d: Option<[f64; 3]>, representative: &str, as_json: bool) {
    if as_json {
        let mut v = json!({ "class": class, "gamma_t": tau });
        if let Some([dp, d1, d2]) = d {
            v["d_p"] = json!(dp);
            v["d_1"] = json!(d1);
            v["d_2"] = json!(d2);
        }
        if !representative.is_empty() {
            v["representative"] = json!(representative);
        }
        println!("{v}");
        return;
    }
    let mut line = format!("class={class}");
    if let Some(t) = tau {
        line.push_str(&format!(" gamma_t={}", fmt12(t)));
    }
    if class != DynamicalClass::Separable {
        if let Some([dp, d1, d2]) = d {
            line.push_str(&format!(" d_p={} d_1={} d_2={}", fmt12(dp), fmt12(d1), fmt12(d2)));
        }
    }
    if !representative.is_empty() {
        line.push_str(&format!(" representative={representative}"));
    }
    println!("{line}");
}

fn evolve(input: &Input, tau: f64, samples: usize, oracle: bool, out: Option<&PathBuf>) -> CmdResult {
    let state = input.parse()?.to_state();
    let tau_max = Tau::new(tau).map_err(|e| Failure::Usage(e.to_string()))?;
    let grid = uniform_grid(tau_max, samples)?;
    let xstate = state.as_xstate();
    let mut csv = String::new();
    if !oracle {
        let x = xstate.ok_or_else(|| Failure::Domain("analytic evolution needs an X-state; use --oracle".into()))?;
        csv.push_str("tau,x0,x1,x2,x3,x4,x5,concurrence\n");
        for t in &grid {
            let e = evolve_xstate(&x, *t);
            let mut row = vec![fmt12(t.value())];
            row.extend(e.to_array().iter().map(|v| fmt12(*v)));
            row.push(fmt12(evolved_xstate_concurrence_raw(&x, *t).max(0.0)));
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
        emit(out, &csv)?;
        return Ok(());
    }
    let rho0 = state.to_density();
    let states = integrate_checkpoints(&rho0, &grid, IntegratorConfig::default())?;
    csv.push_str("tau,concurrence\n");
    let mut max_diff: f64 = 0.0;
    for (t, rho) in grid.iter().zip(&states) {
        let c = wootters_concurrence(rho)?;
        csv.push_str(&format!("{},{}\n", fmt12(t.value()), fmt12(c)));
        if let Some(x) = &xstate {
            let e = evolve_xstate(x, *t);
            let entry = (e.to_density().entries() - rho.entries()).map(|z| z.norm()).max();
            let conc = (evolved_xstate_concurrence_raw(x, *t).max(0.0) - c).abs();
            max_diff = max_diff.max(entry).max(conc);
        }
    }
    let summary = xstate.map(|_| format!("# max_abs_diff={}\n", fmt_sig(max_diff, 3)));
    if let Some(s) = &summary {
        csv.push_str(s);
    }
    emit(out, &csv)?;
    if let (Some(s), Some(_)) = (&summary, out) {
        print!("{s}");
    }
    Ok(())
}

fn parse_slice(s: &str) -> Result<(usize, f64), Failure> {
    let (axis, value) = s
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("slice '{s}' is not of the form axis=value")))?;
    let axis = match axis.trim() {
        "x1" => 0,
        "x2" => 1,
        "x3" => 2,
        other => return Err(Failure::Usage(format!("unknown axis '{other}'"))),
    };
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| Failure::Usage(format!("slice value '{value}': {e}")))?;
    if !(-1.0..=1.0).contains(&value) {
        return Err(Failure::Usage(format!("slice value {value} outside [-1, 1]")));
    }
    Ok((axis, value))
}

fn sweep_row(x: [f64; 3]) -> Option<String> {
    if !in_tetrahedron(x[0], x[1], x[2]) {
        return None;
    }
    let p = BellPoint::new(x[0], x[1], x[2]).ok()?;
    let (class, tau, d) = bell_fields(&p);
    Some(format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt12(x[0]),
        fmt12(x[1]),
        fmt12(x[2]),
        class,
        opt_field(tau),
        fmt12(d[0]),
        fmt12(d[1]),
        fmt12(d[2])
    ))
}

fn sweep(grid: usize, slice: Option<&str>, out: Option<&PathBuf>) -> CmdResult {
    if !(2..=MAX_GRID).contains(&grid) {
        return Err(Failure::Usage(format!("grid must be in 2..={MAX_GRID}, got {grid}")));
    }
    let slice = slice.map(parse_slice).transpose()?;
    let axis = grid_axis(grid);
    let values = |k: usize| match slice {
        Some((a, v)) if a == k => vec![v],
        _ => axis.clone(),
    };
    let (v1, v2, v3) = (values(0), values(1), values(2));
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    sink.write_all(b"x1,x2,x3,class,gamma_t,d_p,d_1,d_2\n")?;
    // one x1 slab at a time keeps memory bounded for large grids
    for &x1 in &v1 {
        let rows: Vec<String> = v2
            .par_iter()
            .map(|&x2| v3.iter().filter_map(|&x3| sweep_row([x1, x2, x3])).collect::<String>())
            .collect();
        for r in rows {
            sink.write_all(r.as_bytes())?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn normal_form(input: &Input, with_classify: bool, as_json: bool) -> CmdResult {
    let state = input.parse()?.to_state();
    let r: RMatrix = state.to_rmatrix();
    let nf = lorentz_normal_form(&r)?;
    let mut report = json!({ "class": nf.class, "raw": nf.values() });
    let mut lines = vec![format!("class={:?}", nf.class)];
    match nf.class {
        NormalFormClass::Diagonal => {
            let n = nf.normalized().expect("nonzero leading value");
            lines.push(format!("diag({})", n.map(|v| fmt_sig(v, 6)).join(", ")));
            report["normalized"] = json!(n);
        }
        NormalFormClass::NonDiagonal => {
            lines.push(format!(
                "x0={} x1={} x2={} x3={} k={}",
                fmt_sig(nf.x0, 6),
                fmt_sig(nf.x1, 6),
                fmt_sig(nf.x2, 6),
                fmt_sig(nf.x3, 6),
                fmt_sig(nf.k, 6)
            ));
            report["k"] = json!(nf.k);
        }
        NormalFormClass::Apex => {}
    }
    if with_classify {
        let (class, tau) = representative_fate(&nf)?;
        let mut line = format!("representative_class={class}");
        if let Some(t) = tau {
            line.push_str(&format!(" gamma_t={}", fmt12(t)));
        }
        lines.push(line);
        report["representative_class"] = json!(class);
        report["representative_gamma_t"] = json!(tau);
        let death = original_death(&state)?;
        lines.push(match death {
            Some(t) => format!("original: concurrence vanishes by tau={}", fmt_sig(t, 6)),
            None => format!("original: no finite death time detected up to tau={NUMERIC_TAU_MAX}"),
        });
        report["original_death_tau"] = json!(death);
    }
    if as_json {
        println!("{report}");
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(())
}

fn representative_fate(nf: &NormalForm) -> Result<(DynamicalClass, Option<f64>), Failure> {
    Ok(match nf.class {
        NormalFormClass::Apex => (DynamicalClass::Separable, None),
        NormalFormClass::NonDiagonal => {
            let r = sdt_nondiagonal(nf.x0, nf.x1, nf.k)?;
            (r.class, r.tau_star)
        }
        NormalFormClass::Diagonal => {
            let c = nf
                .cone_point()
                .ok_or_else(|| Failure::Domain("diagonal representative outside the cone".into()))?;
            let r = sdt_closed_form(&normalize_cone_point(&c)?);
            (r.class, r.tau_star)
        }
    })
}

/// First grid time at which the integrated original state has no
/// concurrence, if any, up to the numeric horizon.
fn original_death(state: &State) -> Result<Option<f64>, Failure> {
    let horizon = Tau::new(NUMERIC_TAU_MAX)?;
    let traj = raw_concurrence_trajectory(&state.to_density(), horizon, ORIGINAL_SCAN_SAMPLES, IntegratorConfig::default())?;
    if traj.first().is_some_and(|(_, c)| *c <= 0.0) {
        return Ok(Some(0.0));
    }
    Ok(traj.iter().skip(1).find(|(_, c)| *c <= 0.0).map(|(t, _)| *t))
}

fn verify_cmd(seed: u64, count: Option<usize>, out: Option<&PathBuf>) -> CmdResult {
    let counts = count.map(Counts::uniform).unwrap_or_default();
    let report = verify::run(seed, counts);
    emit(out, &report.render())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn surface(which: &str, resolution: usize, out: Option<&PathBuf>) -> CmdResult {
    let which: Surface = which.parse()?;
    let points = sample_surface(which, resolution)?;
    emit(out, &surface_csv(&points))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { input, json } => classify(input, *json),
        Command::Evolve {
            input,
            tau,
            samples,
            oracle,
            out,
        } => evolve(input, *tau, *samples, *oracle, out.as_ref()),
        Command::Sweep { grid, slice, out } => sweep(*grid, slice.as_deref(), out.as_ref()),
        Command::NormalForm { input, classify, json } => normal_form(input, *classify, *json),
        Command::Verify { seed, count, out } => verify_cmd(*seed, *count, out.as_ref()),
        Command::Surface {
            which,
            resolution,
            out,
        } => surface(which, *resolution, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
