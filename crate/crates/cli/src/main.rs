//! qhd: run named verification suites over the exact R-matrix engine and
//! emit deterministic JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage error,
//! 3 at least one check is inconclusive (and none fail).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use qhd_core::dynamical::{
    check_dybe, check_dybe_on_distinct_columns, check_dybe_rational, random_point, ra_matrix,
    rs_matrix,
};
use qhd_core::evolution::{
    check_gl_consistency, check_recursion, check_sl_evolution_theta1, check_sl_evolution_theta2,
    jacobi_check, jacobi_check_exact, modular_check, suggested_cutoff, theta_coefficients,
};
use qhd_core::hdalgebra::{all_verified, Hd};
use qhd_core::hecke::{antisymmetrizer, check_glqn, check_trace_identities, symmetrizer};
use qhd_core::kernel::tensor::TensorOp;
use qhd_core::kernel::Scalar;
use qhd_core::ncalgebra::{
    build_hd_presentation, build_re_presentation, build_rtt_presentation, Verdict,
};
use qhd_core::pairing::{pair_t_ai, pair_t_ai_closed_form, pair_t_l, verify_mu_pairing};
use qhd_core::rmatrix::{
    check_hecke, check_ybe, d_matrix, drinfeld_jimbo, o_matrix, skew_inverse, twist, EvalPoint,
    Mode, RMatrixContext,
};

#[derive(Parser)]
#[command(name = "qhd", version, about = "Verification suites for the exact R-matrix engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: rmatrix, hecke, ncalgebra, hdalgebra, spectral, dybe,
    /// evolution, pairing, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Matrix size (2 or 3).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// exact: symbolic entries; rational: entries evaluated at seeded
    /// rational points before composing.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Seed for the rational-point stream.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Theta-series truncation for the evolution suite.
    #[arg(long, default_value_t = 12)]
    cutoff: i64,
    /// Modular-parameter value RE,IM for the evolution suite
    /// (default 0,0.8 at n = 2 and 0,1 at n = 3).
    #[arg(long)]
    tau: Option<String>,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Rational,
}

#[derive(Serialize)]
struct Report {
    version: String,
    config: ConfigOut,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct ConfigOut {
    n: usize,
    mode: String,
    seed: u64,
}

#[derive(Serialize)]
struct Check {
    id: String,
    anchor: String,
    verdict: String,
    millis: u64,
    detail: String,
}

enum Outcome {
    Pass(String),
    Fail(String),
    Inconclusive(String),
}

impl From<Result<String, String>> for Outcome {
    fn from(r: Result<String, String>) -> Outcome {
        match r {
            Ok(d) => Outcome::Pass(d),
            Err(d) => Outcome::Fail(d),
        }
    }
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Verified => Outcome::Pass(String::new()),
        Verdict::Refuted(d) => Outcome::Fail(d),
        Verdict::Inconclusive(d) => Outcome::Inconclusive(d),
    }
}

struct Config {
    n: usize,
    mode: ModeArg,
    seed: u64,
    cutoff: i64,
    tau: Complex64,
}

impl Config {
    /// The seeded evaluation point used by every rational-mode check;
    /// a fresh generator per call keeps suites order-independent.
    fn point(&self) -> Option<EvalPoint> {
        match self.mode {
            ModeArg::Exact => None,
            ModeArg::Rational => {
                let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
                Some(random_point(&mut rng, self.n))
            }
        }
    }

    fn ctx(&self) -> Result<RMatrixContext, String> {
        RMatrixContext::new(self.n, drinfeld_jimbo(self.n), Mode::Gl, self.point())
            .map_err(|e| e.to_string())
    }
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn record(&mut self, id: &str, anchor: &str, outcome: Outcome) {
        let (verdict, detail) = match outcome {
            Outcome::Pass(d) => ("pass", d),
            Outcome::Fail(d) => ("fail", d),
            Outcome::Inconclusive(d) => ("inconclusive", d),
        };
        println!(
            "[{}] {}{}",
            verdict.to_uppercase(),
            id,
            if detail.is_empty() { String::new() } else { format!(" — {detail}") }
        );
        self.checks.push(Check {
            id: id.to_string(),
            anchor: anchor.to_string(),
            verdict: verdict.to_string(),
            // Reports must be byte-identical across runs, so wall-clock
            // timings are pinned to zero.
            millis: 0,
            detail,
        });
    }

    fn run(&mut self, id: &str, anchor: &str, f: impl FnOnce() -> Outcome) {
        let outcome = f();
        self.record(id, anchor, outcome);
    }
}

fn suite_rmatrix(cfg: &Config, r: &mut Runner) {
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            r.record("rmatrix/context", "validated-context", Outcome::Fail(e));
            return;
        }
    };
    r.run("rmatrix/ybe", "yang-baxter-equation", || {
        check_ybe(&ctx.r).map(|_| String::new()).map_err(|w| w.to_string()).into()
    });
    r.run("rmatrix/hecke", "hecke-condition", || {
        check_hecke(&ctx.r, &ctx.qpow(1))
            .map(|_| String::new())
            .map_err(|w| w.to_string())
            .into()
    });
    r.run("rmatrix/o-scalar", "sl-type-scalar-o", || {
        let a_n = match antisymmetrizer(&ctx, ctx.n) {
            Ok(a) => a,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let (o, o_inv) = match o_matrix(&ctx, &a_n) {
            Ok(p) => p,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let sign = if ctx.n % 2 == 0 { -1 } else { 1 };
        let expect = TensorOp::identity(ctx.n, 1).scale(&Scalar::from_int(sign));
        if !o.equals(&expect) {
            return Outcome::Fail(format!("O is not {}·I", sign));
        }
        if !o.compose(&o_inv).equals(&TensorOp::identity(ctx.n, 1)) {
            return Outcome::Fail("O·O^{-1} != I".into());
        }
        Outcome::Pass(format!("O = {sign}·I"))
    });
    r.run("rmatrix/twist-d-invariance", "twist-invariant-d", || {
        let mut f = vec![vec![Scalar::one(); cfg.n]; cfg.n];
        f[0][1] = Scalar::from_ratio(3, 2);
        let rf = match twist(&drinfeld_jimbo(cfg.n), &f) {
            Ok(t) => t,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let tctx = match RMatrixContext::new(cfg.n, rf, Mode::Gl, cfg.point()) {
            Ok(c) => c,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let d0 = d_matrix(&match skew_inverse(&ctx.r) {
            Ok(p) => p,
            Err(e) => return Outcome::Fail(e.to_string()),
        });
        if tctx.d.equals(&d0) {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail("D changed under a diagonal twist".into())
        }
    });
}

fn suite_hecke(cfg: &Config, r: &mut Runner) {
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            r.record("hecke/context", "validated-context", Outcome::Fail(e));
            return;
        }
    };
    r.run("hecke/projector-split", "rank-decomposition", || {
        let a2 = match antisymmetrizer(&ctx, 2) {
            Ok(a) => a,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let s2 = match symmetrizer(&ctx, 2) {
            Ok(s) => s,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        if a2.add(&s2).equals(&TensorOp::identity(ctx.n, 2)) {
            Outcome::Pass("A(2) + S(2) = I".into())
        } else {
            Outcome::Fail("A(2) + S(2) != I".into())
        }
    });
    r.run("hecke/height", "height-certificate", || {
        check_glqn(&ctx).map(|_| String::new()).into()
    });
    let max_i = if cfg.n == 2 { 2 } else { 1 };
    r.run("hecke/trace-identities", "reversal-trace-identities", || {
        match check_trace_identities(&ctx, max_i) {
            Ok(rep) => Outcome::Pass(format!("theta-J verified at levels {:?}", rep.theta_j_levels)),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    });
}

fn suite_ncalgebra(cfg: &Config, r: &mut Runner) {
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            r.record("ncalgebra/context", "validated-context", Outcome::Fail(e));
            return;
        }
    };
    let presentations = [
        ("ncalgebra/rtt-overlaps", build_rtt_presentation(&ctx)),
        ("ncalgebra/re-overlaps", build_re_presentation(&ctx)),
        ("ncalgebra/hd-overlaps", build_hd_presentation(&ctx)),
    ];
    for (id, sys) in presentations {
        r.run(id, "diamond-lemma-overlaps", || {
            let rep = sys.overlap_check(3);
            if rep.all_resolved() {
                Outcome::Pass(format!("{} overlaps resolved", rep.checked))
            } else {
                Outcome::Fail(format!("{} unresolved overlaps", rep.unresolved.len()))
            }
        });
    }
}

fn suite_hdalgebra(cfg: &Config, r: &mut Runner) {
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            r.record("hdalgebra/context", "validated-context", Outcome::Fail(e));
            return;
        }
    };
    let hd = Hd::new(ctx);
    r.run("hdalgebra/centrality", "central-characteristic-elements", || {
        let p1 = hd.power_sum(1);
        let an = match hd.elementary_symmetric(cfg.n) {
            Ok(a) => a,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        verdict_outcome(all_verified([hd.verify_centrality(&p1), hd.verify_centrality(&an)]))
    });
    for i in 2..=cfg.n {
        r.run(&format!("hdalgebra/chn-{i}"), "cayley-hamilton-newton", || {
            match hd.verify_chn(i) {
                Ok(v) => verdict_outcome(v),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        });
    }
    r.run("hdalgebra/newton", "newton-recursion", || {
        match hd.verify_newton(cfg.n) {
            Ok(v) => verdict_outcome(v),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    });
    if cfg.n == 2 {
        r.run("hdalgebra/cayley-hamilton", "cayley-hamilton", || {
            match hd.verify_cayley_hamilton() {
                Ok(v) => verdict_outcome(v),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        });
        r.run("hdalgebra/t-exchange", "t-characteristic-exchange", || {
            let mut items = Vec::new();
            for i in 0..=2 {
                match hd.verify_t_sigma(i) {
                    Ok(v) => items.push(v),
                    Err(e) => return Outcome::Fail(e.to_string()),
                }
            }
            for i in 1..=2 {
                match hd.verify_t_power_sum(i) {
                    Ok(v) => items.push(v),
                    Err(e) => return Outcome::Fail(e.to_string()),
                }
            }
            verdict_outcome(all_verified(items))
        });
        r.run("hdalgebra/lll", "reversed-multi-l-words", || {
            verdict_outcome(all_verified([hd.verify_lll(2), hd.verify_lll(3)]))
        });
        r.run("hdalgebra/det-relations", "determinant-exchange", || {
            match hd.verify_det_relations() {
                Ok(v) => verdict_outcome(v),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        });
        r.run("hdalgebra/sl-det-evolution", "unimodular-determinant-flow", || {
            let sctx = match RMatrixContext::new(2, drinfeld_jimbo(2), Mode::Sl, cfg.point()) {
                Ok(c) => c,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            let sl = match Hd::new_sl(sctx) {
                Ok(h) => h,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            match sl.verify_sl_evolution_determinant() {
                Ok(v) => verdict_outcome(v),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        });
    }
}

fn suite_spectral(cfg: &Config, r: &mut Runner) {
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            r.record("spectral/context", "validated-context", Outcome::Fail(e));
            return;
        }
    };
    let hd = match Hd::new(ctx).spectral_bind() {
        Ok(h) => {
            r.record(
                "spectral/bind",
                "spectral-completion",
                Outcome::Pass(format!("{} rules", h.sys.num_rules())),
            );
            h
        }
        Err(e) => {
            r.record("spectral/bind", "spectral-completion", Outcome::Fail(e.to_string()));
            return;
        }
    };
    r.run("spectral/projectors", "spectral-projectors", || {
        verdict_outcome(hd.verify_spectral_projectors())
    });
    r.run("spectral/mu-exchange", "mu-generator-exchange", || {
        verdict_outcome(hd.verify_mu_exchange())
    });
    r.run("spectral/w-relations", "w-matrix-exchange", || {
        match hd.verify_w_relations() {
            Ok(rep) => verdict_outcome(all_verified(rep.into_iter().map(|(_, v)| v))),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    });
    for (id, dyn_r) in [
        ("spectral/projection-s", rs_matrix(cfg.n)),
        ("spectral/projection-a", ra_matrix(cfg.n)),
    ] {
        r.run(id, "dynamical-projection", || {
            match hd.verify_dynamical_projection(&dyn_r) {
                Ok(v) => verdict_outcome(v),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        });
    }
    r.run("spectral/quantum-plane", "quantum-plane-reduction", || {
        match hd.verify_quantum_plane(&rs_matrix(cfg.n)) {
            Ok(v) => verdict_outcome(v),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    });
    r.run("spectral/left-sector", "left-invariant-sector", || {
        let sctx = match RMatrixContext::new(2, drinfeld_jimbo(2), Mode::Sl, cfg.point()) {
            Ok(c) => c,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let sl = match Hd::new_sl(sctx).and_then(|h| h.spectral_bind()) {
            Ok(h) => h,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        match sl.verify_left_sector() {
            Ok(rep) => verdict_outcome(all_verified(rep.into_iter().map(|(_, v)| v))),
            Err(e) => Outcome::Fail(e.to_string()),
        }
    });
}

fn suite_dybe(cfg: &Config, r: &mut Runner) {
    let rs = rs_matrix(cfg.n);
    let ra = ra_matrix(cfg.n);
    let points = 3;
    r.run("dybe/s-full", "dynamical-yang-baxter-s", || {
        let res = match cfg.mode {
            ModeArg::Exact => check_dybe(&rs, Mode::Gl),
            ModeArg::Rational => check_dybe_rational(&rs, Mode::Gl, cfg.seed, points, false),
        };
        res.map(|_| String::new()).into()
    });
    r.run("dybe/a-distinct", "dynamical-yang-baxter-a", || {
        let res = match cfg.mode {
            ModeArg::Exact => check_dybe_on_distinct_columns(&ra, Mode::Gl),
            ModeArg::Rational => check_dybe_rational(&ra, Mode::Gl, cfg.seed, points, true),
        };
        let note = if cfg.n == 2 {
            "vacuous at n = 2: every column triple repeats an index"
        } else {
            "all pairwise-distinct column triples verified"
        };
        res.map(|_| note.to_string()).into()
    });
    r.run("dybe/a-defect-support", "a-kind-defect-confinement", || {
        // The closed-form A-kind matrix does NOT satisfy the full equation;
        // its defect must sit exactly in the columns the exchange algebra
        // leaves unconstrained (repeated spectral indices). The check passes
        // when the full equation is refuted while the distinct-column part
        // holds.
        let (full, distinct) = match cfg.mode {
            ModeArg::Exact => (
                check_dybe(&ra, Mode::Gl),
                check_dybe_on_distinct_columns(&ra, Mode::Gl),
            ),
            ModeArg::Rational => (
                check_dybe_rational(&ra, Mode::Gl, cfg.seed, 1, false),
                check_dybe_rational(&ra, Mode::Gl, cfg.seed, points, true),
            ),
        };
        match (full, distinct) {
            (Err(w), Ok(())) => {
                Outcome::Pass(format!("full equation refuted ({w}); defect confined"))
            }
            (Ok(()), _) => Outcome::Fail("full equation unexpectedly holds".into()),
            (_, Err(w)) => Outcome::Fail(format!("defect leaks into a distinct column: {w}")),
        }
    });
}

fn suite_evolution(cfg: &Config, r: &mut Runner) {
    r.run("evolution/recursion", "lattice-coefficient-recursion", || {
        let series = match theta_coefficients(cfg.n, cfg.cutoff) {
            Ok(s) => s,
            Err(e) => return Outcome::Fail(e),
        };
        match check_recursion(&series) {
            Ok(rep) => Outcome::Pass(format!(
                "{} lattice steps checked, {} at the boundary skipped",
                rep.checked, rep.boundary_skipped
            )),
            Err(e) => Outcome::Fail(e),
        }
    });
    r.run("evolution/shift-theta1", "first-flow-on-series", || {
        theta_coefficients(cfg.n, cfg.cutoff)
            .and_then(|s| check_sl_evolution_theta1(&s))
            .map(|_| String::new())
            .into()
    });
    r.run("evolution/shift-theta2", "second-flow-on-gaussian", || {
        check_sl_evolution_theta2(cfg.n).map(|_| String::new()).into()
    });
    r.run("evolution/modular", "modular-inversion", || {
        let k = match suggested_cutoff(cfg.n, cfg.tau) {
            Ok(k) => k,
            Err(e) => return Outcome::Fail(e),
        };
        let z: Vec<Complex64> = (1..cfg.n)
            .map(|j| Complex64::new(0.05 / j as f64, 0.02 * j as f64))
            .collect();
        match modular_check(cfg.n, cfg.tau, &z, k) {
            Ok(err) if err < 1e-8 => {
                Outcome::Pass(format!("cutoff {k}, relative error {err:.3e}"))
            }
            Ok(err) => Outcome::Fail(format!("relative error {err:.3e} at cutoff {k}")),
            Err(e) => Outcome::Fail(e),
        }
    });
    r.run("evolution/jacobi", "triple-product", || {
        if let Err(e) = jacobi_check_exact(20) {
            return Outcome::Fail(e);
        }
        match jacobi_check(10, 0.3) {
            Ok(gap) if gap < 1e-12 => {
                Outcome::Pass(format!("exact to order 20; float gap {gap:.3e}"))
            }
            Ok(gap) => Outcome::Fail(format!("float gap {gap:.3e}")),
            Err(e) => Outcome::Fail(e),
        }
    });
    r.run("evolution/gl-consistency", "gl-flow-consistency", || {
        check_gl_consistency(cfg.n).map(|_| String::new()).into()
    });
}

fn suite_pairing(cfg: &Config, r: &mut Runner) {
    // The pairing is defined against the standard symbolic context only, so
    // this suite ignores the rational mode.
    let ctx = match RMatrixContext::new(cfg.n, drinfeld_jimbo(cfg.n), Mode::Gl, None) {
        Ok(c) => c,
        Err(e) => {
            r.record("pairing/context", "validated-context", Outcome::Fail(e.to_string()));
            return;
        }
    };
    r.run("pairing/tensor", "generator-pairing-tensor", || {
        let g = match pair_t_l(&ctx) {
            Ok(g) => g,
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        // Independent cross-check through the Hecke condition:
        // R² = I + (q − q^{−1})R.
        let lam = ctx.qpow(1).sub(&ctx.qpow(-1));
        let scale = Scalar::p_pow((cfg.n * cfg.n) as i32 - 3);
        let alt = TensorOp::identity(cfg.n, 2)
            .add(&ctx.r.map_entries(|s| s.mul(&lam)))
            .map_entries(|s| s.mul(&scale));
        if g.equals(&alt) {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail("pairing tensor fails the Hecke cross-check".into())
        }
    });
    r.run("pairing/characteristic-elements", "closed-form-a-pairing", || {
        for i in 1..=cfg.n {
            if let Err(e) = pair_t_ai(&ctx, i) {
                return Outcome::Fail(format!("a_{i}: {e}"));
            }
        }
        Outcome::Pass(format!("a_1 … a_{} match the closed form", cfg.n))
    });
    r.run("pairing/top-element", "top-pairing-q-inverse", || {
        let expect = ctx.qpow(-1);
        if pair_t_ai_closed_form(cfg.n, cfg.n).sub(&expect).is_zero() {
            Outcome::Pass(String::new())
        } else {
            Outcome::Fail("closed form at i = n is not q^{-1}".into())
        }
    });
    r.run("pairing/spectral-extension", "mu-pairing-consistency", || {
        verify_mu_pairing(cfg.n).map(|_| String::new()).into()
    });
}

const SUITES: &[(&str, fn(&Config, &mut Runner))] = &[
    ("rmatrix", suite_rmatrix),
    ("hecke", suite_hecke),
    ("ncalgebra", suite_ncalgebra),
    ("hdalgebra", suite_hdalgebra),
    ("spectral", suite_spectral),
    ("dybe", suite_dybe),
    ("evolution", suite_evolution),
    ("pairing", suite_pairing),
];

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_tau(raw: Option<&str>, n: usize) -> Result<Complex64, String> {
    match raw {
        None => Ok(Complex64::new(0.0, if n == 2 { 0.8 } else { 1.0 })),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 2 {
                return Err(format!("--tau expects RE,IM, got {s:?}"));
            }
            let re: f64 = parts[0].trim().parse().map_err(|_| format!("bad real part {:?}", parts[0]))?;
            let im: f64 = parts[1].trim().parse().map_err(|_| format!("bad imaginary part {:?}", parts[1]))?;
            if im <= 0.0 {
                return Err("--tau must lie in the upper half-plane".into());
            }
            Ok(Complex64::new(re, im))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify(args) = cli.command;

    if !(2..=3).contains(&args.n) {
        return usage_error("--n must be 2 or 3");
    }
    if args.cutoff < 2 {
        return usage_error("--cutoff must be at least 2");
    }
    let tau = match parse_tau(args.tau.as_deref(), args.n) {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let selected: Vec<&(&str, fn(&Config, &mut Runner))> = if args.suite == "all" {
        SUITES.iter().collect()
    } else {
        match SUITES.iter().find(|(name, _)| *name == args.suite) {
            Some(s) => vec![s],
            None => {
                let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
                return usage_error(&format!(
                    "unknown suite {:?}; expected one of {} or all",
                    args.suite,
                    names.join(", ")
                ));
            }
        }
    };
    // Combinations outside the supported envelope are usage errors, not
    // failures: the spectral completion is built for n = 2, and the full
    // symbolic composition at n = 3 is out of desk-scale reach.
    for (name, _) in &selected {
        if *name == "spectral" && args.n != 2 && args.suite != "all" {
            return usage_error("suite spectral supports --n 2 only");
        }
        if *name == "dybe" && args.n == 3 && args.mode == ModeArg::Exact && args.suite != "all" {
            return usage_error("suite dybe at --n 3 needs --mode rational");
        }
    }

    let cfg = Config {
        n: args.n,
        mode: args.mode,
        seed: args.seed,
        cutoff: args.cutoff,
        tau,
    };
    let mut runner = Runner { checks: Vec::new() };
    for (name, f) in &selected {
        // Under --suite all, silently skip the out-of-envelope combinations
        // instead of erroring.
        if *name == "spectral" && cfg.n != 2 {
            continue;
        }
        if *name == "dybe" && cfg.n == 3 && cfg.mode == ModeArg::Exact {
            continue;
        }
        f(&cfg, &mut runner);
    }

    let failed = runner.checks.iter().filter(|c| c.verdict == "fail").count();
    let inconclusive = runner.checks.iter().filter(|c| c.verdict == "inconclusive").count();
    println!(
        "{} checks: {} passed, {} failed, {} inconclusive",
        runner.checks.len(),
        runner.checks.len() - failed - inconclusive,
        failed,
        inconclusive
    );

    let report = Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigOut {
            n: cfg.n,
            mode: match cfg.mode {
                ModeArg::Exact => "exact".to_string(),
                ModeArg::Rational => "rational".to_string(),
            },
            seed: cfg.seed,
        },
        checks: runner.checks,
    };
    if let Some(path) = &args.json {
        let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }

    if failed > 0 {
        ExitCode::from(1)
    } else if inconclusive > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
