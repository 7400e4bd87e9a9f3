//! `dehn-lab`: batch experiments over the `dehn-core` groups, emitting CSV.
//!
//! Output goes to `--output`, else to `$DEHN_LAB_OUT/<command>.csv` when the
//! variable is set, else to stdout. `--summary` adds a readable table on
//! stderr. Exit status: 0 on success (saturated results included), 2 on
//! usage errors, 3 when a budget runs out before any result exists.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dehn_core::filling::{
    build_wn_gamma, build_wn_j, certificate_to_diagram, corridor_lower_bound, dehn_lower_bound_value, fill_word,
    isodiam_lower_bound_value, AreaOracle,
};
use dehn_core::metrics::{
    cayley_ball, central_amalgam_distortion, central_length_curve, centre_distortion, fit_exponent, AmalgamGroup,
    Curve, FitResult, GcGroup, DEFAULT_N_MIN,
};
use dehn_core::normal_form::AmalgamSchema;
use dehn_core::presentation::{
    build_central_amalgam, build_free_abelian, build_gamma, build_gc, build_hnn_commuting, build_j,
    parse_presentation, Family, Presentation,
};
use dehn_core::word::{Symbol, Word};
use dehn_core::Error;

#[derive(Parser, Debug)]
#[command(name = "dehn-lab", version, about = "Experiments on nilpotent chain amalgams")]
struct ExperimentConfig {
    #[command(subcommand)]
    command: Command,

    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Default directory for CSV output.
    #[arg(long, global = true, env = "DEHN_LAB_OUT", hide_env_values = true)]
    out_dir: Option<PathBuf>,

    /// Also print a readable summary on stderr.
    #[arg(long, global = true)]
    summary: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ball sizes of a Cayley graph.
    Ball(BallArgs),
    /// `d(1, z^n)` in `G_c` with a power-law fit.
    CentralLength(CentralLengthArgs),
    /// Subgroup distortion with a power-law fit.
    Distortion(DistortionArgs),
    /// Area of a null-homotopic word.
    Area(AreaArgs),
    /// Lengths, lower bounds and fillings of the `W_n` family.
    WnReport(WnArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyName {
    /// `G_c`.
    Gc,
    /// `Γ(a,b,c)`.
    Gamma,
    /// `J(a,b)`.
    J,
    /// `G_a *_z G_b`.
    Amalgam,
    /// `Z^2 = ⟨a, b⟩` with a stable letter `t` commuting with `a`.
    Z2Hnn,
    /// `G_c` with a stable letter `s` commuting with the centre.
    GcHnn,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    c: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    a: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    b: Option<u32>,
}

#[derive(Args, Debug)]
struct BallArgs {
    #[command(flatten)]
    group: FamilyArgs,
    #[arg(long)]
    radius: u32,
    /// Maximum number of elements.
    #[arg(long, default_value_t = 20_000_000, value_parser = positive)]
    budget: usize,
}

#[derive(Args, Debug)]
struct CentralLengthArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    c: u32,
    #[arg(long)]
    radius: u32,
    #[arg(long, default_value_t = 20_000_000, value_parser = positive)]
    budget: usize,
    /// Smallest `n` used by the fit.
    #[arg(long, default_value_t = DEFAULT_N_MIN)]
    n_min: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Pair {
    /// `⟨z⟩` in `G_c`.
    Centre,
    /// `G_b` in `G_a *_z G_b`.
    Amalgam,
}

#[derive(Args, Debug)]
struct DistortionArgs {
    #[arg(long, value_enum)]
    pair: Pair,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    c: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    a: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    b: Option<u32>,
    /// Radius in the ambient group.
    #[arg(long)]
    radius: u32,
    /// Radius in the subgroup; larger intrinsic distances are saturated.
    #[arg(long)]
    h_radius: u32,
    #[arg(long, default_value_t = 20_000_000, value_parser = positive)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_N_MIN)]
    n_min: u64,
}

#[derive(Args, Debug)]
struct AreaArgs {
    #[command(flatten)]
    group: FamilyArgs,
    /// Presentation file, instead of `--family`.
    #[arg(long, conflicts_with = "family")]
    presentation: Option<PathBuf>,
    /// The word, e.g. `a t^3 a^-1 t^-3`.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    area_budget: u32,
    #[arg(long, default_value_t = 2_000_000, value_parser = positive)]
    node_budget: usize,
    /// Ball radius for the corridor bound.
    #[arg(long, default_value_t = 12)]
    radius: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    /// `W_n` in `Γ(a,b,c)`; area lower bound.
    Gamma,
    /// `W_n` in `J(a,b)`; diameter lower bound.
    J,
}

#[derive(Args, Debug)]
struct WnArgs {
    #[arg(long, value_enum, default_value_t = Variant::Gamma)]
    variant: Variant,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    a: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    b: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    c: Option<u32>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    n_min: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    /// Ball radius for the lower bound.
    #[arg(long)]
    radius: u32,
    #[arg(long, default_value_t = 20_000_000, value_parser = positive)]
    budget: usize,
    /// Skip the constructive filling columns.
    #[arg(long)]
    no_fill: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// A failed command and the exit status it maps to.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BallBudget { .. } | Error::SearchBudget { .. } => 3,
            Error::Input(_) | Error::Parse { .. } | Error::UnknownSymbol(_) | Error::RankMismatch { .. } => 2,
            _ => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        message: message.into(),
    }
}

type CmdResult = Result<(String, String), Failure>;

fn need(v: Option<u32>, flag: &str, family: &str) -> Result<usize, Failure> {
    v.map(|x| x as usize)
        .ok_or_else(|| usage(format!("--{flag} is required for {family}")))
}

fn presentation_of(args: &FamilyArgs) -> Result<Presentation, Failure> {
    let family = args.family.ok_or_else(|| usage("--family is required"))?;
    Ok(match family {
        FamilyName::Gc => build_gc(need(args.c, "c", "gc")?),
        FamilyName::Gamma => build_gamma(
            need(args.a, "a", "gamma")?,
            need(args.b, "b", "gamma")?,
            need(args.c, "c", "gamma")?,
        ),
        FamilyName::J => build_j(need(args.a, "a", "j")?, need(args.b, "b", "j")?),
        FamilyName::Amalgam => build_central_amalgam(need(args.a, "a", "amalgam")?, need(args.b, "b", "amalgam")?),
        FamilyName::Z2Hnn => {
            let base = build_free_abelian(&["a", "b"])?;
            build_hnn_commuting(&base, &[Symbol::new("a")], &Symbol::new("t"))?
        }
        FamilyName::GcHnn => {
            let c = need(args.c, "c", "gc-hnn")?;
            let base = build_gc(c);
            let centre = Symbol::new(&format!("x{c}"));
            build_hnn_commuting(&base, &[centre], &Symbol::new("s"))?
        }
    })
}

fn fit_block<F: num_traits::Float + std::fmt::Display>(fit: &Result<FitResult<F>, Error>) -> String {
    match fit {
        Ok(f) => format!("{}\n{}\n", FitResult::<F>::CSV_HEADER, f.to_csv_row()),
        Err(e) => format!("# no fit: {e}\n"),
    }
}

fn fit_summary(fit: &Result<FitResult<f64>, Error>) -> String {
    match fit {
        Ok(f) => format!(
            "fit over n in [{}, {}]: exponent {:.4}, r^2 {:.4}, k {:.4}, K {:.4}\n",
            f.n_min, f.n_max, f.exponent, f.r_squared, f.k_hat, f.big_k_hat
        ),
        Err(e) => format!("no fit: {e}\n"),
    }
}

fn curve_summary(curve: &Curve) -> String {
    let mut out = format!("{:>6} {:>12} {}\n", "n", "value", "saturated");
    for s in &curve.samples {
        let v: f64 = num_traits::ToPrimitive::to_f64(&s.value).unwrap_or(f64::NAN);
        let _ = writeln!(out, "{:>6} {:>12.6} {}", s.n, v, if s.saturated { "yes" } else { "" });
    }
    out
}

fn cmd_ball(args: &BallArgs) -> CmdResult {
    let p = presentation_of(&args.group)?;
    let sizes = match p.family {
        Family::Gc(c) => cayley_ball(&GcGroup::new(c), args.radius, args.budget)?.ball_sizes(),
        _ => {
            let schema = AmalgamSchema::for_presentation(&p)?;
            let group = AmalgamGroup::<i64>::new(&schema, &p.generators)?;
            cayley_ball(&group, args.radius, args.budget)?.ball_sizes()
        }
    };
    let mut csv = String::from("radius,size\n");
    let mut summary = format!("{:>6} {:>12}\n", "radius", "ball size");
    for (r, s) in sizes.iter().enumerate() {
        let _ = writeln!(csv, "{r},{s}");
        let _ = writeln!(summary, "{r:>6} {s:>12}");
    }
    Ok((csv, summary))
}

fn cmd_central_length(args: &CentralLengthArgs) -> CmdResult {
    let curve = central_length_curve(args.c as usize, args.radius, args.budget)?;
    let fit = fit_exponent::<f64>(&curve.points(false), args.n_min);
    let csv = format!("{}\n{}", curve.to_csv(), fit_block(&fit));
    Ok((csv, curve_summary(&curve) + &fit_summary(&fit)))
}

fn cmd_distortion(args: &DistortionArgs) -> CmdResult {
    let curve = match args.pair {
        Pair::Centre => {
            let c = need(args.c, "c", "centre")?;
            centre_distortion(c, args.radius, args.h_radius, args.budget)?
        }
        Pair::Amalgam => {
            let a = need(args.a, "a", "amalgam")?;
            let b = need(args.b, "b", "amalgam")?;
            central_amalgam_distortion(a, b, args.radius, args.h_radius, args.budget)?
        }
    };
    let fit = fit_exponent::<f64>(&curve.points(false), args.n_min);
    let csv = format!("{}\n{}", curve.to_csv(), fit_block(&fit));
    Ok((csv, curve_summary(&curve) + &fit_summary(&fit)))
}

/// `(v, m)` when `w = v τ^m v^-1 τ^-m` with `v` free of `τ` and `m ≠ 0`.
fn corridor_shape(w: &Word, stable: &Symbol) -> Option<(Word, u64)> {
    let letters = w.letters();
    let first = letters.iter().position(|l| &l.symbol == stable)?;
    let v = w.subword(0, first);
    let sign = letters[first].inverse;
    let run = letters[first..]
        .iter()
        .take_while(|l| &l.symbol == stable && l.inverse == sign)
        .count();
    let m = run as i64 * if sign { -1 } else { 1 };
    let expected = v
        .concat(&Word::power(stable, m))
        .concat(&v.inverse())
        .concat(&Word::power(stable, -m));
    (expected == *w).then(|| (v, run as u64))
}

fn cmd_area(args: &AreaArgs) -> CmdResult {
    let p = match &args.presentation {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_presentation(&text)?
        }
        None => presentation_of(&args.group)?,
    };
    let w = p.parse_word(&args.word)?;
    let mut csv = String::from("quantity,value,saturated\n");
    let mut summary = format!("word: {w}\n");

    let mut oracle = AreaOracle::new(&p, args.node_budget);
    match oracle.area(&w, args.area_budget) {
        Ok(Some(a)) => {
            let _ = writeln!(csv, "oracle_area,{a},false");
            let _ = writeln!(summary, "oracle area: {a}");
        }
        Ok(None) => {
            let _ = writeln!(csv, "oracle_area,{},true", args.area_budget);
            let _ = writeln!(summary, "oracle area: > {}", args.area_budget);
        }
        Err(Error::SearchBudget { completed }) => {
            let _ = writeln!(csv, "oracle_area,{completed},true");
            let _ = writeln!(summary, "oracle area: > {completed} (node budget)");
        }
        Err(e) => return Err(e.into()),
    }

    match fill_word(&p, &w) {
        Ok(cert) => {
            let _ = writeln!(csv, "filler_area,{},false", cert.area());
            let _ = writeln!(summary, "filler area: {}", cert.area());
        }
        Err(Error::NotNullHomotopic(g)) => {
            let _ = writeln!(summary, "not null-homotopic: {g}");
        }
        Err(Error::SearchBudget { completed }) => {
            let _ = writeln!(summary, "filler: search budget exhausted past area {completed}");
        }
        Err(e) => return Err(e.into()),
    }

    if let Family::Hnn { stable, .. } = &p.family {
        if let Some((v, m)) = corridor_shape(&w, stable) {
            let b = corridor_lower_bound(&p, &v, m, args.radius, 20_000_000)?;
            let _ = writeln!(csv, "corridor_bound,{},{}", b.value, b.saturated);
            let _ = writeln!(
                summary,
                "corridor bound: {}{}",
                b.value,
                if b.saturated { " (radius reached)" } else { "" }
            );
        }
    }
    Ok((csv, summary))
}

fn cmd_wn_report(args: &WnArgs) -> CmdResult {
    if args.n_min > args.n_max {
        return Err(usage("--n-min exceeds --n-max"));
    }
    let (a, b) = (args.a as usize, args.b as usize);
    let p = match args.variant {
        Variant::Gamma => build_gamma(a, b, need(args.c, "c", "gamma")?),
        Variant::J => build_j(a, b),
    };
    let schema = AmalgamSchema::for_presentation(&p)?;
    let relators = p.symmetrized();
    let mut csv = String::from("n,length,lower_bound,lower_bound_saturated,filler_area,filler_diameter\n");
    let mut summary = format!(
        "{:>4} {:>8} {:>14} {:>12} {:>10}\n",
        "n", "|W_n|", "lower bound", "filler area", "diameter"
    );
    for n in args.n_min..=args.n_max {
        let ni = i64::try_from(n).map_err(|_| usage("n out of range"))?;
        let w = match args.variant {
            Variant::Gamma => build_wn_gamma(a, b, args.c.unwrap_or(1) as usize, ni),
            Variant::J => build_wn_j(a, b, ni),
        };
        if !schema.is_identity(&w)? {
            return Err(Failure {
                status: 1,
                message: format!("W_{n} is not null-homotopic"),
            });
        }
        let (bound, saturated) = match args.variant {
            Variant::Gamma => {
                let c = args.c.unwrap_or(1) as usize;
                let bd = dehn_lower_bound_value(a, b, c, n, args.radius, args.budget)?;
                (bd.value.to_string(), bd.saturated)
            }
            Variant::J => {
                let bd = isodiam_lower_bound_value(a, b, n, args.radius, args.budget)?;
                let v = num_traits::ToPrimitive::to_f64(&bd.value).unwrap_or(f64::NAN);
                (format!("{v:.1}"), bd.saturated)
            }
        };
        let (area, diam) = if args.no_fill {
            (String::new(), String::new())
        } else {
            let cert = fill_word(&p, &w)?;
            let d = certificate_to_diagram(&cert, &relators)?;
            (cert.area().to_string(), d.diameter().to_string())
        };
        let _ = writeln!(csv, "{n},{},{bound},{saturated},{area},{diam}", w.len());
        let _ = writeln!(
            summary,
            "{n:>4} {:>8} {:>14} {:>12} {:>10}",
            w.len(),
            if saturated { format!(">={bound}") } else { bound },
            area,
            diam
        );
    }
    Ok((csv, summary))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ball(_) => "ball",
        Command::CentralLength(_) => "central-length",
        Command::Distortion(_) => "distortion",
        Command::Area(_) => "area",
        Command::WnReport(_) => "wn-report",
    }
}

fn run(config: &ExperimentConfig) -> Result<(), Failure> {
    let (csv, summary) = match &config.command {
        Command::Ball(a) => cmd_ball(a),
        Command::CentralLength(a) => cmd_central_length(a),
        Command::Distortion(a) => cmd_distortion(a),
        Command::Area(a) => cmd_area(a),
        Command::WnReport(a) => cmd_wn_report(a),
    }?;
    let target = config.output.clone().or_else(|| {
        config
            .out_dir
            .as_ref()
            .map(|d| d.join(format!("{}.csv", command_name(&config.command))))
    });
    match target {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure {
                    status: 1,
                    message: format!("cannot create {}: {e}", dir.display()),
                })?;
            }
            std::fs::write(&path, csv).map_err(|e| Failure {
                status: 1,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
        }
        None => print!("{csv}"),
    }
    if config.summary {
        eprint!("{summary}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let config = ExperimentConfig::parse();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dehn-lab: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
