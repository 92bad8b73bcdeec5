//! Command-line front end: solve, bound, verify, oracle and inspect.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use kronecker_core::certificate::{verify, Certificate};
use kronecker_core::exactnum::{format_rational, parse_rational, Interval};
use kronecker_core::geometry::successive_minima;
use kronecker_core::kronecker::{
    avoidance_witness, bound_theorem1, bound_theorem2, oracle_min_q, oracle_min_x, solve_theorem1, solve_theorem2,
    thetas_from_witness, Solution, TheoremBound,
};
use kronecker_core::problem::{Avoidance, Problem};
use kronecker_core::Error;
use num_rational::BigRational;
use num_traits::Signed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "kronecker", version, about = "Certified Kronecker approximation in algebraic lattices")]
pub struct Cli {
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "KRONECKER_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a problem and write a certificate.
    Solve {
        problem: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: Option<u8>,
        /// Certificate destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Print the itemised theorem bound for a list of epsilons.
    Bound {
        problem: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: Option<u8>,
        /// Comma-separated rationals such as `0.1,1/100`.
        #[arg(long)]
        epsilon_list: Option<String>,
    },
    /// Re-check a certificate against its problem.
    Verify { certificate: PathBuf, problem: PathBuf },
    /// Brute-force reference answers.
    Oracle {
        problem: PathBuf,
        #[arg(long, value_enum)]
        what: OracleWhat,
        #[arg(long, default_value_t = 1000)]
        cap: u64,
    },
    /// Print derived lattice data.
    Inspect { problem: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleWhat {
    MinQ,
    MinX,
}

/// Run a parsed command line, writing the report to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let r = match cli.command {
        Command::Solve { problem, theorem, out: path, precision_cap } => {
            cmd_solve(&problem, theorem, path.as_deref(), precision_cap, out)
        }
        Command::Bound { problem, theorem, epsilon_list } => cmd_bound(&problem, theorem, epsilon_list.as_deref(), out),
        Command::Verify { certificate, problem } => cmd_verify(&certificate, &problem, out),
        Command::Oracle { problem, what, cap } => cmd_oracle(&problem, what, cap, out),
        Command::Inspect { problem } => cmd_inspect(&problem, out),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(cli, &mut stdout.lock(), &mut stderr.lock())
}

fn io<T>(r: std::io::Result<T>) -> Result<T, Error> {
    r.map_err(|e| Error::Io(e.to_string()))
}

/// Decimal scientific notation of a positive interval's upper end.
pub fn sci(i: &Interval) -> String {
    let l2 = i.hi.log2_approx();
    if !l2.is_finite() {
        return "0".into();
    }
    let l10 = l2 * std::f64::consts::LOG10_2;
    let e = l10.floor();
    format!("{:.4}e{}", 10f64.powf(l10 - e), e as i64)
}

fn log10_ratio(num: &Interval, den: &Interval) -> f64 {
    (num.hi.log2_approx() - den.lo.log2_approx()) * std::f64::consts::LOG10_2
}

fn theorem_for(p: &Problem, requested: Option<u8>) -> Result<u8, Error> {
    let natural = match p.avoidance {
        Avoidance::Polynomials(_) => 1,
        Avoidance::Sublattices(_) => 2,
    };
    match requested {
        Some(t) if t != natural => Err(Error::InvalidInput(format!(
            "theorem {t} does not match the avoidance mode of the problem (theorem {natural})"
        ))),
        _ => Ok(natural),
    }
}

fn load(path: &Path) -> Result<Problem, Error> {
    Problem::load(path)
}

fn cmd_solve(
    path: &Path,
    theorem: Option<u8>,
    cert_path: Option<&Path>,
    precision_cap: Option<u32>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let mut p = load(path)?;
    if let Some(c) = precision_cap {
        p.options.precision_cap = c.max(64);
    }
    let sol = match theorem_for(&p, theorem)? {
        1 => solve_theorem1(&p)?,
        _ => solve_theorem2(&p)?,
    };
    if let Some(c) = cert_path {
        io(std::fs::write(c, Certificate::build(&sol, &p).to_canonical_string()))?;
    }
    io(write_summary(&sol, &p, out))?;
    Ok(EXIT_OK)
}

fn write_summary(sol: &Solution, p: &Problem, out: &mut dyn Write) -> std::io::Result<()> {
    let bound = sol.bound.value();
    writeln!(out, "theorem        {}", sol.theorem)?;
    writeln!(out, "problem hash   {}", p.hash)?;
    writeln!(out, "epsilon        {}", format_rational(&p.epsilon))?;
    let y: Vec<String> = sol.witness.y_coords.iter().map(|c| c.to_string()).collect();
    writeln!(out, "witness y      ({})", y.join(", "))?;
    match &sol.d_prime {
        None => writeln!(out, "q              {}", sol.multiplier)?,
        Some(d) => {
            writeln!(out, "D'             {d}")?;
            writeln!(out, "g              {}", sol.multiplier)?;
        }
    }
    let x: Vec<String> = sol.x_coords.iter().map(|c| c.to_string()).collect();
    writeln!(out, "x              ({})", x.join(", "))?;
    let pv: Vec<String> = sol.p.iter().map(|c| c.to_string()).collect();
    writeln!(out, "p              ({})", pv.join(", "))?;
    for (i, r) in sol.residuals.iter().enumerate() {
        writeln!(out, "residual {:<5} {}", i + 1, r)?;
    }
    writeln!(out, "|x|            {}", sol.x_norm_enclosure)?;
    writeln!(out, "norm bound     {}", sci(bound))?;
    writeln!(out, "log10 ratio    {:.2}", log10_ratio(bound, &sol.x_norm_enclosure))?;
    writeln!(out, "KR bound       {} (sharp {})", sci(&sol.kr_generic), sci(&sol.kr_sharp))?;
    Ok(())
}

fn parse_eps_list(s: Option<&str>, p: &Problem) -> Result<Vec<BigRational>, Error> {
    match s {
        None => Ok(vec![p.epsilon.clone()]),
        Some(list) => list
            .split(',')
            .map(|t| match parse_rational(t) {
                Some(q) if q.is_positive() => Ok(q),
                _ => Err(Error::InvalidInput(format!("malformed epsilon {t:?}"))),
            })
            .collect(),
    }
}

fn cmd_bound(path: &Path, theorem: Option<u8>, eps_list: Option<&str>, out: &mut dyn Write) -> Result<i32, Error> {
    let p = load(path)?;
    let th = theorem_for(&p, theorem)?;
    let eps = parse_eps_list(eps_list, &p)?;
    let mut first = true;
    for e in &eps {
        let b = match th {
            1 => TheoremBound::First(bound_theorem1(&p, e)?),
            _ => TheoremBound::Second(bound_theorem2(&p, e)?),
        };
        if first {
            io(write_constants(&b, &p, out))?;
            io(writeln!(out, "{:<14} {:<22} {:<14} {:<14}", "epsilon", "eps^(-l+1)", "bound", "simplified"))?;
            first = false;
        }
        let (ef, value, simp) = match &b {
            TheoremBound::First(b) => (&b.eps_factor, &b.value, &b.simplified),
            TheoremBound::Second(b) => (&b.eps_factor, &b.value, &b.simplified),
        };
        io(writeln!(out, "{:<14} {:<22} {:<14} {:<14}", format_rational(e), format_rational(ef), sci(value), sci(simp)))?;
    }
    Ok(EXIT_OK)
}

fn write_constants(b: &TheoremBound, p: &Problem, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "t = {}, s = {}, d = {}, w = {}, l = {}", p.t(), p.s(), p.d(), p.w(), p.ell)?;
    writeln!(out, "h(B)           {}", p.forms.height)?;
    match b {
        TheoremBound::First(b) => {
            writeln!(out, "theorem 1")?;
            writeln!(out, "kappa          {}", b.kappa)?;
            writeln!(out, "a_K            {}", sci(&b.a_k))?;
            writeln!(out, "c_K            {}", sci(&b.c_k.value))?;
            writeln!(out, "h(alpha)       {}", b.c_k.height)?;
            writeln!(out, "sd M_S |D|^s/2 {}", b.base)?;
        }
        TheoremBound::Second(b) => {
            writeln!(out, "theorem 2")?;
            writeln!(out, "kappa          {}", b.kappa)?;
            writeln!(out, "b_K            {}", sci(&b.b_k))?;
            writeln!(out, "E_alpha        {}", b.e_alpha)?;
            writeln!(out, "h(alpha)       {}", b.h_alpha)?;
            writeln!(out, "D              {}", b.d_total)?;
        }
    }
    Ok(())
}

fn cmd_verify(cert_path: &Path, problem: &Path, out: &mut dyn Write) -> Result<i32, Error> {
    let text = io(std::fs::read_to_string(cert_path))?;
    let cert = Certificate::parse(&text)?;
    let p = load(problem)?;
    let report = verify(&cert, &p);
    for item in &report.items {
        io(writeln!(out, "{:<14} {:<4} {}", item.name, if item.pass { "pass" } else { "FAIL" }, item.detail))?;
    }
    if report.item("problem_hash").is_some_and(|i| !i.pass) {
        return Ok(EXIT_VALIDATION);
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_oracle(path: &Path, what: OracleWhat, cap: u64, out: &mut dyn Write) -> Result<i32, Error> {
    let p = load(path)?;
    match what {
        OracleWhat::MinQ => {
            let w = avoidance_witness(&p)?;
            let ts = thetas_from_witness(&p.forms, &w.y_embedded)?;
            let q = oracle_min_q(&ts.thetas, &p.a, &p.epsilon, cap)?;
            io(writeln!(out, "{q}"))?;
        }
        OracleWhat::MinX => {
            let pt = oracle_min_x(&p, cap)?;
            let c: Vec<String> = pt.coeffs.iter().map(|c| c.to_string()).collect();
            io(writeln!(out, "x      ({})", c.join(", ")))?;
            io(writeln!(out, "|x|    {}", pt.norm.evaluate(64)))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_inspect(path: &Path, out: &mut dyn Write) -> Result<i32, Error> {
    let p = load(path)?;
    let w = |out: &mut dyn Write, s: String| io(writeln!(out, "{s}"));
    w(out, format!("problem hash     {}", p.hash))?;
    w(out, format!("[E:Q]            {}", p.efield.degree()))?;
    w(out, format!("t, s, d, w       {}, {}, {}, {}", p.t(), p.s(), p.d(), p.w()))?;
    w(out, format!("l computed/used  {} / {}", p.ell_computed, p.ell))?;
    w(out, format!("det^2 (Gram)     {}", format_rational(&p.det.gram_det)))?;
    w(out, format!("det (Gram)       {}", p.det.enclosure))?;
    w(out, format!("det^2 (closed)   {}", format_rational(&p.det.closed_form_sq)))?;
    w(out, format!("|D_K(M)|         {}", format_rational(&p.abs_disc_m())))?;
    w(out, format!("disc form agrees {}", p.det.discriminant_form_agrees))?;
    let m = successive_minima(&p.lattice)?;
    for (i, (l, v)) in m.enclosures.iter().zip(&m.vectors).enumerate() {
        let c: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        w(out, format!("lambda_{:<9} {} at ({})", i + 1, l, c.join(", ")))?;
    }
    let cands: Vec<String> = p
        .ideal
        .candidates
        .iter()
        .map(|a| format!("[{}]", a.coords().iter().map(format_rational).collect::<Vec<_>>().join(", ")))
        .collect();
    w(out, format!("U_K candidates   {}", cands.len()))?;
    for c in cands.iter().take(8) {
        w(out, format!("  {c}"))?;
    }
    for (i, h) in p.forms.row_heights.iter().enumerate() {
        w(out, format!("h(L_{})           {}", i + 1, h))?;
    }
    w(out, format!("h(B)             {}", p.forms.height))?;
    Ok(EXIT_OK)
}
