//! Batch front end for the symmetrized-tridisc library: membership reports,
//! kernel norms, Schwarz feasibility, interpolant construction, orbit
//! tracing, the certification sweep, and a worked-datum selfcheck.  Output is
//! machine readable (JSON objects, CSV tables), byte-stable for identical
//! inputs, and the process exits with 0 (success/true), 1 (negative result),
//! 2 (undecided near a boundary), or 64 (usage or parse error) only.

#![forbid(unsafe_code)]
// Range gates are written with negated comparisons so that NaN falls through
// to the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tridisc::geometry::{
    criteria_report, d_norm, is_degenerate, membership_via_roots, phi_disc_image, upsilon_norm,
    CriteriaReport, SymPoint,
};
use tridisc::interp::{build_interpolant, from_params, InterpolantParams};
use tridisc::linalg2::{herm_eig, op_norm, Mat2, Vec2, Verdict};
use tridisc::schwarz::{schwarz_feasible, DominantBranch};
use tridisc::verify::{reports_to_csv, sweep};
use tridisc::{CScalar, Error};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "tridisc",
    version,
    about = "Membership, feasibility, and interpolation for the symmetrized tridisc"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate every membership criterion and the cubic-root oracle at a point
    Membership {
        /// Point as "s1,s2,p" with complex entries like 1.5, -0.3+0.25i, i
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Test against the closed domain instead of the open one
        #[arg(long)]
        closed: bool,
        /// Margin width treated as numerically ambiguous
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the kernel norms and the boundary disc image of a point
    Dnorm {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Decide two-point Schwarz feasibility for mapping lambda0 to the point
    Feasible {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
    },
    /// Construct an interpolating map and emit its parameter record
    Interpolate {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        /// Base-matrix shape parameter; must satisfy xi1 < sigma^2 < xi2
        #[arg(long)]
        sigma: Option<f64>,
        /// Admissible direction as "a1,a2" (complex entries)
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Schur parameter as row-major "q11,q12,q21,q22"
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Write the parameter record to this file as well
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an interpolant from a parameter record over a polar grid as CSV
    Trace {
        #[arg(long)]
        file: PathBuf,
        /// Number of radii and of angles in the grid
        #[arg(long, default_value_t = 24)]
        grid: usize,
    },
    /// Run the seeded certification sweep and print its CSV report
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        samples: usize,
    },
    /// Reproduce the worked extremal datum end to end
    Selfcheck,
}

fn fj(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".to_string()
    }
}

fn cj(z: CScalar) -> String {
    format!("[{},{}]", fj(z.re), fj(z.im))
}

fn pj(x: &SymPoint) -> String {
    format!(
        "{{\"s1\":{},\"s2\":{},\"p\":{}}}",
        cj(x.s1),
        cj(x.s2),
        cj(x.p)
    )
}

fn vj(v: &Verdict) -> String {
    format!("{{\"holds\":{},\"margin\":{}}}", v.holds, fj(v.margin))
}

/// Complex literal grammar: `a`, `bi`, `a+bi`, `a-bi`, with `i`, `+i`, `-i`
/// as unit imaginary parts and decimal or scientific real literals.
fn parse_complex(raw: &str) -> Result<CScalar, String> {
    let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let body = match t.strip_suffix('i') {
        Some(b) => b,
        None => {
            let re: f64 = t
                .parse()
                .map_err(|_| format!("cannot parse {:?} as a real number", raw))?;
            return Ok(CScalar::new(re, 0.0));
        }
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let b = bytes[idx];
        if (b == b'+' || b == b'-') && bytes[idx - 1] != b'e' && bytes[idx - 1] != b'E' {
            split = Some(idx);
            break;
        }
    }
    let unit = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other
                .parse()
                .map_err(|_| format!("cannot parse {:?} as a complex number", raw)),
        }
    };
    match split {
        Some(idx) => {
            let re: f64 = body[..idx]
                .parse()
                .map_err(|_| format!("cannot parse {:?} as a complex number", raw))?;
            Ok(CScalar::new(re, unit(&body[idx..])?))
        }
        None => Ok(CScalar::new(0.0, unit(body)?)),
    }
}

fn parse_parts(raw: &str, n: usize, what: &str) -> Result<Vec<CScalar>, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != n {
        return Err(format!(
            "{} needs {} comma-separated complex entries, got {}",
            what,
            n,
            parts.len()
        ));
    }
    parts.iter().map(|p| parse_complex(p)).collect()
}

fn parse_point(raw: &str) -> Result<SymPoint, String> {
    let v = parse_parts(raw, 3, "a point")?;
    Ok(SymPoint::new(v[0], v[1], v[2]))
}

/// Library errors map onto the exit-code contract: an infeasible request is
/// a negative result, everything else is a precondition or parse problem.
fn fail(err: Error) -> u8 {
    eprintln!("error: {}", err);
    match err {
        Error::Infeasible(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn usage(msg: String) -> u8 {
    eprintln!("error: {}", msg);
    EXIT_USAGE
}

fn membership_json(x: &SymPoint, rep: &CriteriaReport) -> String {
    let criteria: Vec<String> = rep
        .criteria
        .iter()
        .map(|(label, v)| {
            format!(
                "{{\"label\":\"{}\",\"holds\":{},\"margin\":{}}}",
                label,
                v.holds,
                fj(v.margin)
            )
        })
        .collect();
    format!(
        "{{\"point\":{},\"closed\":{},\"criteria\":[{}],\"mirror_disc_strict\":{},\"root\":{{\"member\":{},\"margin\":{},\"boundary_torus\":{}}},\"consensus\":{},\"near_boundary\":{},\"member\":{}}}",
        pj(x),
        rep.closed,
        criteria.join(","),
        rep.mirror_disc_strict
            .as_ref()
            .map_or_else(|| "null".to_string(), vj),
        rep.root.member,
        fj(rep.root.margin),
        rep.root.boundary_torus,
        rep.consensus,
        rep.near_boundary,
        rep.member
    )
}

fn cmd_membership(point: &str, closed: bool, tol: f64) -> u8 {
    let x = match parse_point(point) {
        Ok(x) => x,
        Err(m) => return usage(m),
    };
    if !(tol > 0.0) || !tol.is_finite() {
        return usage(format!("tol = {} must be a positive real", tol));
    }
    let rep = criteria_report(&x, closed, tol);
    println!("{}", membership_json(&x, &rep));
    if rep.near_boundary || !rep.consensus {
        EXIT_UNDECIDED
    } else if rep.member {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_dnorm(point: &str) -> u8 {
    let x = match parse_point(point) {
        Ok(x) => x,
        Err(m) => return usage(m),
    };
    if !x.is_finite() {
        return usage("point coordinates must be finite".into());
    }
    let disc = phi_disc_image(&x);
    println!(
        "{{\"point\":{},\"degenerate\":{},\"d_phi\":{},\"d_upsilon\":{},\"disc_center\":{},\"disc_radius\":{},\"disc_bounded\":{}}}",
        pj(&x),
        is_degenerate(&x),
        fj(d_norm(&x)),
        fj(upsilon_norm(&x)),
        cj(disc.center),
        fj(disc.radius),
        disc.bounded
    );
    EXIT_OK
}

fn branch_name(b: DominantBranch) -> &'static str {
    match b {
        DominantBranch::S1 => "s1",
        DominantBranch::S2 => "s2",
    }
}

fn cmd_feasible(point: &str, lambda0: &str) -> u8 {
    let x = match parse_point(point) {
        Ok(x) => x,
        Err(m) => return usage(m),
    };
    let l0 = match parse_complex(lambda0) {
        Ok(l) => l,
        Err(m) => return usage(m),
    };
    let rep = match schwarz_feasible(l0, &x) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!(
        "{{\"point\":{},\"lambda0\":{},\"d_phi\":{},\"d_upsilon\":{},\"bound\":{},\"lambda0_abs\":{},\"feasible\":{},\"equality_case\":{},\"dominant_branch\":\"{}\"}}",
        pj(&x),
        cj(l0),
        fj(rep.d_phi),
        fj(rep.d_upsilon),
        fj(rep.bound),
        fj(rep.lambda0_abs),
        rep.feasible,
        rep.equality_case,
        branch_name(rep.dominant_branch)
    );
    if rep.feasible {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_interpolate(
    point: &str,
    lambda0: &str,
    sigma: Option<f64>,
    alpha: Option<&str>,
    q: Option<&str>,
    out: Option<&PathBuf>,
) -> u8 {
    let x = match parse_point(point) {
        Ok(x) => x,
        Err(m) => return usage(m),
    };
    let l0 = match parse_complex(lambda0) {
        Ok(l) => l,
        Err(m) => return usage(m),
    };
    let alpha = match alpha {
        Some(raw) => match parse_parts(raw, 2, "alpha") {
            Ok(v) => Some(Vec2::new(v[0], v[1])),
            Err(m) => return usage(m),
        },
        None => None,
    };
    let q = match q {
        Some(raw) => match parse_parts(raw, 4, "Q") {
            Ok(v) => Some(Mat2::new(v[0], v[1], v[2], v[3])),
            Err(m) => return usage(m),
        },
        None => None,
    };
    let phi = match build_interpolant(&x, l0, sigma, alpha, q) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let at0 = match phi.eval(CScalar::new(0.0, 0.0)) {
        Ok((v, _)) => v.s1.norm().max(v.s2.norm()).max(v.p.norm()),
        Err(e) => return fail(e),
    };
    let atl = match phi.eval(l0) {
        Ok((v, _)) => (v.s1 - x.s1)
            .norm()
            .max((v.s2 - x.s2).norm())
            .max((v.p - x.p).norm()),
        Err(e) => return fail(e),
    };
    // Schur-bound probe on a ring near the boundary.
    let mut schur = 0.0f64;
    for k in 0..64 {
        let lam = CScalar::from_polar(0.97, std::f64::consts::TAU * k as f64 / 64.0);
        match phi.eval(lam) {
            Ok((_, f)) => schur = schur.max(op_norm(&f)),
            Err(e) => return fail(e),
        }
    }
    let record = phi.params.to_json();
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, format!("{}\n", record)) {
            return usage(format!("cannot write {}: {}", path.display(), e));
        }
    }
    println!(
        "{{\"case\":\"{}\",\"residual_at_zero\":{},\"residual_at_lambda0\":{},\"schur_probe_max\":{},\"params\":{}}}",
        phi.params.case.as_str(),
        fj(at0),
        fj(atl),
        fj(schur),
        record
    );
    EXIT_OK
}

fn cmd_trace(file: &PathBuf, grid: usize) -> u8 {
    if grid == 0 {
        return usage("grid must be at least 1".into());
    }
    let raw = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return usage(format!("cannot read {}: {}", file.display(), e)),
    };
    let params = match InterpolantParams::from_json(raw.trim()) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let phi = match from_params(params) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let mut out =
        String::from("lam_re,lam_im,s1_re,s1_im,s2_re,s2_im,p_re,p_im,in_G3,schur_norm\n");
    for j in 1..=grid {
        let r = 0.999 * j as f64 / grid as f64;
        for k in 0..grid {
            let lam = CScalar::from_polar(r, std::f64::consts::TAU * k as f64 / grid as f64);
            let (v, f) = match phi.eval(lam) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let member = membership_via_roots(&v, false).member;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fj(lam.re),
                fj(lam.im),
                fj(v.s1.re),
                fj(v.s1.im),
                fj(v.s2.re),
                fj(v.s2.im),
                fj(v.p.re),
                fj(v.p.im),
                member,
                fj(op_norm(&f))
            ));
        }
    }
    print!("{}", out);
    EXIT_OK
}

fn cmd_verify(seed: u64, samples: usize) -> u8 {
    let reports = match sweep(seed, samples) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    print!("{}", reports_to_csv(&reports));
    let mut code = EXIT_OK;
    for rep in &reports {
        if rep.max_residual >= 1e-9 {
            eprintln!(
                "FAIL {}: max residual {} at {}",
                rep.tag,
                fj(rep.max_residual),
                rep.worst_input
            );
            code = EXIT_NEGATIVE;
        }
    }
    code
}

fn cmd_selfcheck() -> u8 {
    let mut all_ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        if pass {
            println!("ok {}", name);
        } else {
            println!("FAIL {}: {}", name, detail);
            all_ok = false;
        }
    };
    let x = SymPoint::new(
        CScalar::new(1.5, 0.0),
        CScalar::new(0.75, 0.0),
        CScalar::new(0.5, 0.0),
    );
    let l0 = CScalar::new(-0.8, 0.0);

    let d = d_norm(&x);
    let u = upsilon_norm(&x);
    check(
        "kernel-norms",
        (d - 0.8).abs() < 1e-12 && (u - 0.5).abs() < 1e-12,
        format!("d_phi = {}, d_upsilon = {}", d, u),
    );

    let base = tridisc::interp::build_z(&x, l0, 1.0);
    match base {
        Ok(z) => {
            let w2 = z.b12 * z.b12;
            let norm = op_norm(&z);
            let eig = herm_eig(&z);
            let spectrum_ok = match eig {
                Ok(e) => (e.lambda_min + 1.0).abs() < 1e-10 && (e.lambda_max - 0.625).abs() < 1e-10,
                Err(_) => false,
            };
            check(
                "base-matrix",
                (w2 - CScalar::new(15.0 / 32.0, 0.0)).norm() < 1e-12
                    && (norm - 1.0).abs() < 1e-10
                    && spectrum_ok,
                format!("w^2 = {}, norm = {}", w2, norm),
            );
        }
        Err(e) => check("base-matrix", false, e.to_string()),
    }

    let ts = [
        CScalar::new(0.0, 0.0),
        CScalar::new(1.0, 0.0),
        CScalar::new(0.0, 0.5),
    ];
    let mut corner_ok = true;
    let mut corner_detail = String::new();
    for t in ts {
        let phi = match tridisc::interp::section4_family(t) {
            Ok(p) => p,
            Err(e) => {
                corner_ok = false;
                corner_detail = e.to_string();
                break;
            }
        };
        let g = match tridisc::interp::scalar_two_point(
            CScalar::new(0.3, 0.0),
            l0,
            CScalar::new(0.625, 0.0),
            t,
        ) {
            Ok(g) => g,
            Err(e) => {
                corner_ok = false;
                corner_detail = e.to_string();
                break;
            }
        };
        let g0 = g.eval(CScalar::new(0.0, 0.0));
        let expected = (g0 * 10.0 - 3.0) / 13.0;
        match phi.eval(CScalar::new(0.0, 0.0)) {
            Ok((_, f0)) => {
                let gap = (f0.b22 - expected).norm();
                if gap >= 1e-12 {
                    corner_ok = false;
                    corner_detail = format!("corner identity off by {} at t = {}", gap, t);
                    break;
                }
            }
            Err(e) => {
                corner_ok = false;
                corner_detail = e.to_string();
                break;
            }
        }
    }
    check("family-corner-identity", corner_ok, corner_detail);

    let fam = |t: f64| tridisc::interp::section4_family(CScalar::new(t, 0.0)).unwrap();
    let (a, b) = (fam(0.0), fam(1.0));
    let zero = CScalar::new(0.0, 0.0);
    let max_coord = |p: &SymPoint, q: &SymPoint| {
        (p.s1 - q.s1)
            .norm()
            .max((p.s2 - q.s2).norm())
            .max((p.p - q.p).norm())
    };
    let endpoints_ok = match (a.eval(zero), b.eval(zero), a.eval(l0), b.eval(l0)) {
        (Ok((a0, _)), Ok((b0, _)), Ok((al, _)), Ok((bl, _))) => {
            max_coord(&a0, &SymPoint::zero()) <= 1e-10
                && max_coord(&b0, &SymPoint::zero()) <= 1e-10
                && max_coord(&al, &x) <= 1e-10
                && max_coord(&bl, &x) <= 1e-10
        }
        _ => false,
    };
    check("family-endpoints", endpoints_ok, String::new());

    let half = CScalar::new(0.5, 0.0);
    let split = match (a.eval(half), b.eval(half)) {
        (Ok((av, _)), Ok((bv, _))) => max_coord(&av, &bv),
        _ => 0.0,
    };
    check(
        "family-splits-inside",
        split >= 1e-3,
        format!("gap at 1/2 is {}", split),
    );

    if all_ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("TRIDISC_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("TRIDISC_THREADS must be an integer >= 1, got {:?}", v))?;
            if n == 0 {
                return Err("TRIDISC_THREADS must be >= 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}

fn run(cli: Cli) -> u8 {
    match cli.cmd {
        Cmd::Membership { point, closed, tol } => cmd_membership(&point, closed, tol),
        Cmd::Dnorm { point } => cmd_dnorm(&point),
        Cmd::Feasible { point, lambda0 } => cmd_feasible(&point, &lambda0),
        Cmd::Interpolate {
            point,
            lambda0,
            sigma,
            alpha,
            q,
            out,
        } => cmd_interpolate(
            &point,
            &lambda0,
            sigma,
            alpha.as_deref(),
            q.as_deref(),
            out.as_ref(),
        ),
        Cmd::Trace { file, grid } => cmd_trace(&file, grid),
        Cmd::Verify { seed, samples } => cmd_verify(seed, samples),
        Cmd::Selfcheck => cmd_selfcheck(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {}", msg);
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(run(cli))
}
