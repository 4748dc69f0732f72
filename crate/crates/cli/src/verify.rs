//! The verification suite: every closed-form identity the library relies on,
//! checked numerically and reported with residuals. Nothing is silently
//! skipped; known bookkeeping discrepancies are reported as informational
//! entries rather than asserted away.

use num_complex::Complex;
use serde::Serialize;
use weylkit::grid::{wigner_transform, GridSpec, GridSymbol};
use weylkit::hilbert::{
    kernel_from_u, unitarity_residual, Grid1, IntegralKernel, Wavefunction,
};
use weylkit::maps::{
    compose_u, contact_kernel, contact_solve, darboux_apply, fourier_u,
    gauge_kernel, generating_t, kernel_residual, lp_mixed_kernel, rational_contact_residuals,
    sl2_position_kernel_closed_form, u_contact, u_gauge, u_linear_potential, u_sl2,
    DarbouxVariant, MapFamily, MapSpec, NamedFunc,
};
use weylkit::propagator::{
    apply_propagator, cubic_phase_integral_closed, cubic_phase_integral_quadrature,
    propagator_apply_flow, propagator_from_kernel, u30_case,
};
use weylkit::scalar::Coeff;
use weylkit::symbolic::{
    bopp_image, ccr_exact, ccr_numeric, flow_exact, image_commutator_check, moyal_bracket_poly,
    monomial_image, regular_lattice, solve_gauge_function, star_poly, FlowSymbol, HbarSeries,
    OperatorWord, RationalSymbol,
};
use weylkit::{Exact, Symbol, Word};

type C64 = Complex<f64>;

/// One verification row. `equation` is the identity tag from the library's
/// check catalogue; each check cites exactly one tag.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub equation: &'static str,
    pub hbar: f64,
    pub grid: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// informational rows record open-question findings and never fail the
    /// suite
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub hbars: Vec<f64>,
    pub grids: Vec<usize>,
    pub seed: u64,
    pub tol_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub environment: Environment,
    pub checks: Vec<CheckResult>,
    pub overall_pass: bool,
}

/// Default tolerances, one row per check id. Overridable only through the
/// global `tol_scale`.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("ccr.exact", 0.0),
    ("ccr.grading", 0.0),
    ("ccr.poisson.lattice", 1e-8),
    ("star.assoc", 0.0),
    ("flow.riccati.symbolic", 0.0),
    ("flow.riccati.lattice", 1e-8),
    ("image.cubic", 0.0),
    ("image.fourier", 0.0),
    ("kernel.pde.sl2", 1e-4),
    ("kernel.pde.gauge", 1e-4),
    ("kernel.pde.lp", 1e-4),
    ("kernel.pde.contact", 1e-4),
    ("kernel.sl2.position", 1e-4),
    ("kernel.sl2.identity_limit", 1e-3),
    ("kernel.lp.mixed", 1e-6),
    ("kernel.gauge.action", 1e-9),
    ("gen.t.sl2", 1e-6),
    ("gen.t.gauge", 1e-6),
    ("gen.t.curl", 1e-8),
    ("wigner.dual", 1e-8),
    ("wigner.peak", 1e-6),
    ("u30.routes", 1e-4),
    ("u30.airy", 1e-3),
    ("prop.route.translation", 1e-4),
    ("prop.route.gauge", 1e-4),
    ("prop.route.rotation", 1e-4),
    ("prop.marginal", 1e-6),
    ("darboux.action", 1e-8),
    ("darboux.nonunitary", 0.1),
    ("darboux.intertwiner", 1e-4),
    ("unitarity.catalogue", 1e-5),
    ("contact.implicit", 1e-12),
    ("contact.action", 1e-6),
    ("contact.sinh.limit", 1e-4),
    ("dec3.compose", 1e-4),
    ("diagram.gauge", 1e-3),
    ("closure.gauge_gauge", 0.0),
    ("closure.gauge_contact", 0.0),
];

fn tol_for(id: &str, scale: f64) -> f64 {
    DEFAULT_TOLERANCES
        .iter()
        .find(|(k, _)| id.starts_with(k))
        .map(|(_, t)| t * scale)
        .unwrap_or(0.0)
}

struct Ctx {
    checks: Vec<CheckResult>,
    tol_scale: f64,
    seed: u64,
}

impl Ctx {
    fn push(&mut self, id: &str, equation: &'static str, hbar: f64, grid: usize, residual: f64) {
        let tolerance = tol_for(id, self.tol_scale);
        // a zero tolerance means the check is exact
        let pass = if tolerance == 0.0 {
            residual == 0.0
        } else {
            residual <= tolerance
        };
        self.checks.push(CheckResult {
            check_id: id.to_string(),
            equation,
            hbar,
            grid,
            residual,
            tolerance,
            pass,
            informational: false,
            note: None,
        });
    }

    fn push_threshold(
        &mut self,
        id: &str,
        equation: &'static str,
        hbar: f64,
        grid: usize,
        value: f64,
    ) {
        // pass when the value EXCEEDS the tolerance (non-unitarity style)
        let tolerance = tol_for(id, self.tol_scale);
        self.checks.push(CheckResult {
            check_id: id.to_string(),
            equation,
            hbar,
            grid,
            residual: value,
            tolerance,
            pass: value > tolerance,
            informational: false,
            note: Some("pass requires the value to exceed the threshold".into()),
        });
    }

    fn info(&mut self, id: &str, equation: &'static str, residual: f64, note: String) {
        self.checks.push(CheckResult {
            check_id: id.to_string(),
            equation,
            hbar: 1.0,
            grid: 0,
            residual,
            tolerance: f64::NAN,
            pass: true,
            informational: true,
            note: Some(note),
        });
    }
}

fn minus_i_hbar() -> Symbol {
    let mut s = Symbol::zero();
    s.add_term(0, 0, HbarSeries::term(1, -Exact::i()));
    s
}

/// Exact-equality residual between symbols: 0 when identical, else the
/// coefficient-magnitude of the difference.
fn sym_residual(a: &Symbol, b: &Symbol) -> f64 {
    let d = a.sub(b);
    if d.is_zero() {
        0.0
    } else {
        d.norm_at(1.0)
    }
}

// ---------------------------------------------------------------- symbolic

fn check_ccr_exact(ctx: &mut Ctx) {
    let mb = moyal_bracket_poly(&Symbol::p(), &Symbol::q());
    ctx.push("ccr.exact", "mb.2", 0.0, 0, sym_residual(&mb, &minus_i_hbar()));
}

fn polynomial_catalogue() -> Vec<(&'static str, MapSpec)> {
    vec![
        ("identity", MapSpec::new(MapFamily::Identity)),
        (
            "sl2.shear",
            MapSpec::new(MapFamily::Sl2 {
                a: 1.0,
                b: 0.0,
                c: 0.5,
                d: 1.0,
            }),
        ),
        (
            // dyadic entries with exact unit determinant, so the grading
            // check stays a coefficient-level identity
            "sl2.generic",
            MapSpec::new(MapFamily::Sl2 {
                a: 1.5,
                b: 0.5,
                c: 0.25,
                d: 0.75,
            }),
        ),
        ("lp", MapSpec::new(MapFamily::LinearPotential { a: 0.5 })),
        ("dec1", MapSpec::dec1(0.5)),
    ]
}

fn check_ccr_grading(ctx: &mut Ctx) {
    for (name, map) in polynomial_catalogue() {
        let (p_new, q_new) = map.poly_coords().expect("polynomial family");
        let rep = ccr_exact(&p_new, &q_new);
        let mut residual = rep.poisson_deviation + rep.moyal_deviation;
        for (_, norm) in &rep.higher_order_norms {
            residual += norm;
        }
        ctx.push(&format!("ccr.grading.{name}"), "central0", 0.0, 0, residual);
    }
}

fn check_ccr_lattice(ctx: &mut Ctx) {
    // the explicitly solvable nonlinear flow, on a lattice avoiding its pole
    let beta = 0.5;
    let spec = MapSpec::new(MapFamily::MonomialFlow {
        m: 2,
        n: 1,
        beta,
    });
    let p_eval = |p: f64, q: f64| spec.eval(p, q).map(|(pp, _)| pp);
    let q_eval = |p: f64, q: f64| spec.eval(p, q).map(|(_, qq)| qq);
    let lattice = regular_lattice((-1.0, 1.0), (-1.0, 1.0), 10);
    let rep = ccr_numeric(&p_eval, &q_eval, &lattice, 1e-3).expect("regular lattice");
    ctx.push("ccr.poisson.lattice", "central2", 1.0, 10, rep.max_deviation);
}

fn lcg_next(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *state
}

fn random_poly(state: &mut u64) -> Symbol {
    let mut s = Symbol::zero();
    let terms = 2 + (lcg_next(state) % 4) as usize;
    for _ in 0..terms {
        let m = (lcg_next(state) % 3) as u32;
        let n = (lcg_next(state) % 3) as u32;
        if m + n > 5 {
            continue;
        }
        let num = (lcg_next(state) % 19) as i64 - 9;
        let den = 1 + (lcg_next(state) % 4) as i64;
        s.add_term(m, n, HbarSeries::constant(Exact::from_ratio(num, den)));
    }
    s
}

fn check_star_associativity(ctx: &mut Ctx) {
    let mut state = ctx.seed ^ 0x9e3779b97f4a7c15;
    let mut residual = 0.0f64;
    for _ in 0..50 {
        let f = random_poly(&mut state);
        let g = random_poly(&mut state);
        let h = random_poly(&mut state);
        let left = star_poly(&star_poly(&f, &g), &h);
        let right = star_poly(&f, &star_poly(&g, &h));
        residual += sym_residual(&left, &right);
    }
    ctx.push("star.assoc", "star.1", 0.0, 50, residual);
}

fn check_flow_riccati(ctx: &mut Ctx) {
    // e^{−iγS21}: P = p/(1+γħp), Q = q(1+γħp)², exactly, as rational symbols
    let v = monomial_image::<Exact>(2, 1);
    let mut residual = 0.0f64;
    for gamma_num in [1i64, 1, -3] {
        let gamma_den = [1i64, 2, 7][(gamma_num.unsigned_abs() % 3) as usize];
        let gamma = Exact::from_ratio(gamma_num, gamma_den);
        let p_flow = match flow_exact(&v, &(-gamma.clone()), &Symbol::p()) {
            Ok(f) => f.as_rational(),
            Err(_) => {
                residual += 1.0;
                continue;
            }
        };
        let mut den = Symbol::one();
        den.add_term(1, 0, HbarSeries::term(1, gamma.clone()));
        let want_p = RationalSymbol {
            num: Symbol::p(),
            den: den.clone(),
        };
        if !p_flow.equivalent(&want_p) {
            residual += 1.0;
        }
        let q_flow = match flow_exact(&v, &(-gamma.clone()), &Symbol::q()) {
            Ok(FlowSymbol::Rational(r)) => r,
            Ok(FlowSymbol::Poly(p)) => RationalSymbol::from_poly(p),
            Err(_) => {
                residual += 1.0;
                continue;
            }
        };
        let want_q = RationalSymbol {
            num: Symbol::q().mul(&den).mul(&den),
            den: Symbol::one(),
        };
        if !q_flow.equivalent(&want_q) {
            residual += 1.0;
        }
    }
    ctx.push("flow.riccati.symbolic", "corr.11", 0.0, 0, residual);

    // numeric bracket on the 10×10 lattice
    check_ccr_lattice_named(ctx, "flow.riccati.lattice", "corr.11");
}

fn check_ccr_lattice_named(ctx: &mut Ctx, id: &str, eq: &'static str) {
    let spec = MapSpec::new(MapFamily::MonomialFlow {
        m: 2,
        n: 1,
        beta: 0.5,
    });
    let p_eval = |p: f64, q: f64| spec.eval(p, q).map(|(pp, _)| pp);
    let q_eval = |p: f64, q: f64| spec.eval(p, q).map(|(_, qq)| qq);
    let lattice = regular_lattice((-1.0, 1.0), (-1.0, 1.0), 10);
    let rep = ccr_numeric(&p_eval, &q_eval, &lattice, 1e-3).expect("regular lattice");
    ctx.push(id, eq, 1.0, 10, rep.max_deviation);
}

fn check_images(ctx: &mut Ctx) {
    // cubic-shear generator: iħ(3p²∂q − (ħ²/4)∂q³)
    type Img = weylkit::Image;
    let v = monomial_image::<Exact>(3, 0);
    let want = Img::single((2, 0, 0, 1), HbarSeries::term(1, Exact::i() * Exact::from_int(3)))
        .add(&Img::single(
            (0, 0, 0, 3),
            HbarSeries::term(3, Exact::i() * Exact::from_ratio(-1, 4)),
        ));
    ctx.push("image.cubic", "pcov.7", 0.0, 0, if v == want { 0.0 } else { 1.0 });

    // rotation generator: 2iħ(p∂q − q∂p)
    let gen = Word::symmetric_monomial(2, 0).add(&Word::symmetric_monomial(0, 2));
    let vf = bopp_image(&gen);
    let want_f = Img::single((1, 0, 0, 1), HbarSeries::term(1, Exact::i() * Exact::from_int(2)))
        .add(&Img::single(
            (0, 1, 1, 0),
            HbarSeries::term(1, Exact::i() * Exact::from_int(-2)),
        ));
    ctx.push("image.fourier", "gct.1", 0.0, 0, if vf == want_f { 0.0 } else { 1.0 });

    // informational: the quoted first-order form of the p²q image drops an
    // ħ³∂p∂q² term that the defining commutator produces
    let s21 = monomial_image::<Exact>(2, 1);
    let (low, high) = s21.split_first_order();
    let _ = low;
    let tail: f64 = high.terms().map(|(_, s)| s.abs_at(1.0)).sum();
    ctx.info(
        "open.s21.tail",
        "corr.10",
        tail,
        "the symmetric p²q image carries an ħ³∂p∂q²/4 tail beyond the quoted \
         first-order vector field; the commutator definition is authoritative"
            .into(),
    );
}

// ------------------------------------------------------------------- grids

fn check_kernel_pdes(ctx: &mut Ctx, hbar: f64, n: usize) {
    // linear symplectic samples
    let th: f64 = 0.25;
    let sl2_samples = [
        (1.0, 0.0, 0.4, 1.0),
        (th.cos(), th.sin(), -th.sin(), th.cos()),
        (1.1, 0.3, 0.2, (1.0 + 0.3 * 0.2) / 1.1),
    ];
    for (i, (a, b, c, d)) in sl2_samples.iter().enumerate() {
        let spec = GridSpec::square(2.0, n, hbar).expect("grid");
        let m = MapSpec::new(MapFamily::Sl2 {
            a: *a,
            b: *b,
            c: *c,
            d: *d,
        });
        let u = u_sl2(*a, *b, *c, *d, &spec).expect("u");
        let (rq, rp) = kernel_residual(&u, &m, 0).expect("residual");
        ctx.push(&format!("kernel.pde.sl2.{i}"), "int.9", hbar, n, rq.max(rp));
    }

    for (name, a_func) in [
        ("const", NamedFunc::Const { value: 1.5 }),
        (
            "linear",
            NamedFunc::Poly {
                coeffs: vec![0.0, 1.0],
            },
        ),
    ] {
        let spec = GridSpec::square(2.0, n, hbar).expect("grid");
        let m = MapSpec::new(MapFamily::Gauge {
            a: a_func.clone(),
            tau: 0.7,
        });
        let u = u_gauge(&a_func, 0.7, &spec).expect("u");
        let (rq, rp) = kernel_residual(&u, &m, 0).expect("residual");
        ctx.push(
            &format!("kernel.pde.gauge.{name}"),
            "int.22",
            hbar,
            n,
            rq.max(rp),
        );
    }

    {
        let spec = GridSpec::square(2.0, n, hbar).expect("grid");
        let m = MapSpec::new(MapFamily::LinearPotential { a: 0.4 });
        let u = u_linear_potential(0.4, &spec);
        let (rq, rp) = kernel_residual(&u, &m, 0).expect("residual");
        ctx.push("kernel.pde.lp", "int.12", hbar, n, rq.max(rp));
    }

    // point maps: the truncated star converges fast only on small windows,
    // and the order-8 stencils are round-off-limited on fine grids, so these
    // run on fixed coarse windows independent of the requested resolution
    let contact_n = 40;
    for (name, q_func, half) in [
        (
            "identity",
            NamedFunc::Poly {
                coeffs: vec![0.0, 1.0],
            },
            1.5,
        ),
        ("exp", NamedFunc::Exp, 0.6),
        ("sinh", NamedFunc::SinhScaled { alpha: 0.4 }, 0.8),
    ] {
        let spec = GridSpec::square(half, contact_n, hbar).expect("grid");
        let m = MapSpec::new(MapFamily::Contact {
            q_func: q_func.clone(),
        });
        let u = u_contact(&q_func, &spec).expect("u");
        let (rq, rp) = kernel_residual(&u, &m, 0).expect("residual");
        ctx.push(
            &format!("kernel.pde.contact.{name}"),
            "gct.4",
            hbar,
            contact_n,
            rq.max(rp),
        );
    }
}

fn check_sl2_position_kernel(ctx: &mut Ctx, hbar: f64) {
    let (a, b, c, d) = (1.0, 0.0, 1.0, 1.0);
    let uspec = GridSpec::new(-20.0, 20.0, -6.0, 6.0, 800, 96, hbar).expect("grid");
    let u = u_sl2(a, b, c, d, &uspec).expect("u");
    let out_grid = Grid1::new(-2.0, 2.0, 48);
    let in_grid = Grid1::new(-2.0, 2.0, 48);
    let quad = kernel_from_u(&u, out_grid.clone(), in_grid.clone()).expect("kernel");
    let closed = sl2_position_kernel_closed_form(a, b, c, d, out_grid, in_grid, hbar)
        .expect("closed form");
    let residual = match (&quad, &closed) {
        (
            IntegralKernel::Dense { values: v1, .. },
            IntegralKernel::Dense { values: v2, .. },
        ) => v1
            .iter()
            .zip(v2.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    ctx.push("kernel.sl2.position", "int.10", hbar, 800, residual);
}

fn check_sl2_identity_limit(ctx: &mut Ctx) {
    // rotation path toward the identity: the kernel action on the ground
    // state converges to the ground state. Large angles run through the
    // dense chirp kernel, small angles through the analytic point form;
    // the errors must decrease along the path and end below tolerance.
    let hbar = 1.0;
    let n = 1024;
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, n, hbar, 0.0, 0.0);
    let norm = std::f64::consts::PI.powf(-0.25);
    let mut last = f64::INFINITY;
    let mut monotone = true;
    for theta in [0.45f64, 0.35, 0.25, 0.02, 0.004, 0.0015] {
        let m = MapSpec::new(MapFamily::Sl2 {
            a: theta.cos(),
            b: -theta.sin(),
            c: theta.sin(),
            d: theta.cos(),
        });
        // keep the point map's preimage y/cosθ inside the state grid
        let out_grid = Grid1::new(-11.5, 11.5, n);
        let k = m
            .position_kernel(out_grid.clone(), Grid1::new(-12.0, 12.0, n), hbar)
            .expect("kernel");
        let out = k.apply_position(&psi).expect("apply").expect_position();
        let mut acc = 0.0f64;
        for i in 0..out.0.n {
            let y = out.0.x(i);
            let want = C64::new(norm * (-y * y / 2.0).exp(), 0.0);
            let w = if i == 0 || i + 1 == out.0.n { 0.5 } else { 1.0 };
            acc += (out.0.values[i] - want).norm_sqr() * w;
        }
        let err = (acc * out.0.dx()).sqrt();
        if err > last * 1.05 {
            monotone = false;
        }
        last = err;
    }
    let residual = if monotone { last } else { f64::INFINITY };
    ctx.push("kernel.sl2.identity_limit", "int.15", hbar, n, residual);
}

fn check_lp_mixed_kernel(ctx: &mut Ctx, hbar: f64) {
    // K(y,p_x) against e^{i(y p_x − a p_x³/3)/ħ} from the momentum-side
    // synthesis out of u
    let a = 0.4;
    let spec = GridSpec::new(-6.0, 6.0, -4.0, 4.0, 1024, 64, hbar).expect("grid");
    let u = u_linear_potential(a, &spec);
    let out_grid = Grid1::new(-3.0, 3.0, 64);
    let in_grid = Grid1::new(-5.0, 5.0, 128);
    let k = weylkit::hilbert::kernel_from_u_mixed(&u, out_grid.clone(), in_grid.clone())
        .expect("mixed kernel");
    let want = lp_mixed_kernel(a, out_grid, in_grid, hbar);
    let residual = match (&k, &want) {
        (
            IntegralKernel::Dense { values: v1, .. },
            IntegralKernel::Dense { values: v2, .. },
        ) => v1
            .iter()
            .zip(v2.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    ctx.push("kernel.lp.mixed", "int.13", hbar, 256, residual);
}

fn check_gauge_action(ctx: &mut Ctx, hbar: f64) {
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, hbar, 0.3, 0.0);
    let tau = 1.0;
    let lam = 2.0;
    let k = gauge_kernel(
        &NamedFunc::Const { value: lam },
        tau,
        Grid1::new(-12.0, 12.0, 512),
        hbar,
    )
    .expect("kernel");
    let out = k.apply_position(&psi).expect("apply").expect_position();
    let mut residual = 0.0f64;
    for i in 0..psi.0.n {
        let y = psi.0.x(i);
        let phase = tau * lam * y / hbar;
        let want = psi.0.values[i] * C64::new(phase.cos(), phase.sin());
        residual = residual.max((out.0.values[i] - want).norm());
    }
    ctx.push("kernel.gauge.action", "int.23", hbar, 512, residual);
}

fn check_generating_t(ctx: &mut Ctx, hbar: f64, n: usize) {
    let spec = GridSpec::square(2.0, n, hbar).expect("grid");
    // linear symplectic target
    let (a, b, c) = (1.2, 0.3, 0.4);
    let d = (1.0 + b * c) / a;
    let m = MapSpec::new(MapFamily::Sl2 { a, b, c, d });
    let g = generating_t(&m, &spec).expect("solvable");
    let s = a + d + 2.0;
    let mut residual = 0.0f64;
    for i in 0..spec.np {
        let p = spec.p(i);
        for j in 0..spec.nq {
            let q = spec.q(j);
            let want = (b * q * q - c * p * p + (a - d) * p * q) / s;
            residual = residual.max((g.t.at(i, j).re - want).abs());
            residual = residual.max(g.t.at(i, j).im.abs());
        }
    }
    ctx.push("gen.t.sl2", "int.18", hbar, n, residual);
    ctx.push("gen.t.curl.sl2", "int.18", hbar, n, g.curl_residual);

    let tau = 0.8;
    let mg = MapSpec::new(MapFamily::Gauge {
        a: NamedFunc::Poly {
            coeffs: vec![0.0, 2.0],
        },
        tau,
    });
    let gg = generating_t(&mg, &spec).expect("solvable");
    let mut residual_g = 0.0f64;
    for i in 0..spec.np {
        for j in 0..spec.nq {
            let q = spec.q(j);
            residual_g = residual_g.max((gg.t.at(i, j).re - tau / 2.0 * q * q).abs());
        }
    }
    ctx.push("gen.t.gauge", "int.22", hbar, n, residual_g);
    ctx.push("gen.t.curl.gauge", "int.22", hbar, n, gg.curl_residual);
}

fn check_wigner(ctx: &mut Ctx, hbar: f64, n: usize) {
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, hbar, 0.7, -0.4);
    let phi = psi.to_momentum(-12.0, 12.0, 512);
    let spec = GridSpec::square(3.0, n, hbar).expect("grid");
    let w1 = wigner_transform(&psi, &spec).expect("wigner");
    let w2 = weylkit::grid::wigner_from_momentum(&phi, &spec).expect("wigner");
    let residual = w1.interior_max_diff(&w2, 0).expect("same grid");
    ctx.push("wigner.dual", "pcov.9", hbar, n, residual);

    // ground-state peak at ħ = 1 only (2 is the ħ-independent peak value,
    // but the quadrature spot-check is defined on the standard state)
    if (hbar - 1.0).abs() < 1e-12 {
        let g = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, 1.0, 0.0, 0.0);
        let spec0 = GridSpec::square(2.0, 65, 1.0).expect("grid");
        let w = wigner_transform(&g, &spec0).expect("wigner");
        let peak = w.at(32, 32).re;
        ctx.push("wigner.peak", "pcov.9", 1.0, 65, (peak - 2.0).abs());
    }
}

fn check_u30(ctx: &mut Ctx, hbar: f64, n: usize) {
    let psi = Wavefunction::<f64>::gaussian(-14.0, 14.0, 512, hbar, 0.0, 0.0);
    let spec = GridSpec::square(4.0, n, hbar).expect("grid");
    let rep = u30_case(&psi, 0.1, &spec).expect("u30");
    ctx.push("u30.routes", "pcov.15", hbar, n, rep.max_route_difference);
    if (hbar - 1.0).abs() < 1e-12 {
        let quad = cubic_phase_integral_quadrature(0.0, 1.0, 1.0);
        let closed = cubic_phase_integral_closed(0.0, 1.0, 1.0);
        ctx.push("u30.airy.spot", "pcov.8", 1.0, 0, (quad - 3.5412).abs());
        ctx.push("u30.airy.reduction", "pcov.8", 1.0, 0, (quad - closed).abs());
    }
}

fn check_propagator_routes(ctx: &mut Ctx, hbar: f64, n: usize) {
    let spec = GridSpec::square(4.0, n, hbar).expect("grid");
    // any smooth decaying field tests route equivalence; keep its scales
    // ħ-independent so the truncated stars stay converged at every ħ
    let w = GridSymbol::sample(&spec, |p: f64, q: f64| {
        Ok(C64::new(2.0 * (-(p * p + q * q)).exp(), 0.0))
    })
    .expect("sample");

    // translation: u = e^{iαp/ħ}, generator image of αp̂/ħ is iα∂q
    let alpha = 0.5;
    {
        let u = GridSymbol::sample(&spec, |p: f64, _q| Ok(C64::new(0.0, alpha * p / hbar).exp()))
            .expect("sample");
        let g = propagator_from_kernel(&u, 6).expect("inverse");
        let kernel_route = apply_propagator(&g, &w).expect("apply");
        // operator transform direction: u⁻¹ ⋆ f ⋆ u = e^{iγV} f with
        // Û = e^{iγÂ}; here Û = e^{i(α/ħ)p̂}, so γ = α/ħ and V = iħ∂q
        let gen = bopp_image(&OperatorWord::<Exact>::p_hat());
        let flow_route = propagator_apply_flow(&gen, alpha / hbar, &w).expect("flow");
        let d = kernel_route
            .interior_max_diff(&flow_route, 16)
            .expect("diff");
        ctx.push("prop.route.translation", "pcov.16", hbar, n, d);
    }

    // constant gauge field
    {
        let tau = 0.6;
        let lam = 1.0;
        let u = u_gauge(&NamedFunc::Const { value: lam }, tau, &spec).expect("u");
        let g = propagator_from_kernel(&u, 6).expect("inverse");
        let kernel_route = apply_propagator(&g, &w).expect("apply");
        let gen = bopp_image(&Word::q_hat()); // image of q̂: −iħ∂p
        let flow_route =
            propagator_apply_flow(&gen, tau * lam / hbar, &w).expect("flow");
        let d = kernel_route
            .interior_max_diff(&flow_route, 16)
            .expect("diff");
        ctx.push("prop.route.gauge", "pcov.16", hbar, n, d);
    }

    // rotation
    {
        let theta: f64 = 0.2;
        let u = u_sl2(theta.cos(), theta.sin(), -theta.sin(), theta.cos(), &spec).expect("u");
        let g = propagator_from_kernel(&u, 8).expect("inverse");
        let kernel_route = apply_propagator(&g, &w).expect("apply");
        let gen = bopp_image(
            &Word::symmetric_monomial(2, 0).add(&Word::symmetric_monomial(0, 2)),
        );
        let flow_route =
            propagator_apply_flow(&gen, -theta / (2.0 * hbar), &w).expect("flow");
        let d = kernel_route
            .interior_max_diff(&flow_route, 16)
            .expect("diff");
        ctx.push("prop.route.rotation", "pcov.16", hbar, n, d);
    }

    // p-marginal preservation under the cubic flow realization
    {
        let v30 = monomial_image::<Exact>(3, 0);
        let out = propagator_apply_flow(&v30, 0.05, &w).expect("flow");
        let m0 = w.q_marginal();
        let m1 = out.q_marginal();
        let mut md = 0.0f64;
        for i in 6..spec.np - 6 {
            md = md.max((m0[i] - m1[i]).norm());
        }
        ctx.push("prop.marginal", "pcov.8", hbar, n, md);
    }
}

fn check_darboux(ctx: &mut Ctx, hbar: f64) {
    let g = NamedFunc::Poly {
        coeffs: vec![0.0, 1.0],
    };
    let alpha = 0.703125;
    let spec = GridSpec::square(2.0, 64, hbar).expect("grid");
    let c = weylkit::maps::c_darboux(&g, alpha, DarbouxVariant::C, &spec).expect("c");
    let r = unitarity_residual(&c).expect("residual");
    ctx.push_threshold("darboux.nonunitary", "non.4", hbar, 64, r);

    // action against the closed form
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 513, hbar, 0.0, 0.0);
    let out = darboux_apply(&g, alpha, DarbouxVariant::C, &psi).expect("apply");
    let mut residual = 0.0f64;
    for i in 0..out.0.n {
        let y = out.0.x(i);
        let want = (-alpha * y / hbar).exp()
            * std::f64::consts::PI.powf(-0.25)
            * (-(y + alpha) * (y + alpha) / 2.0).exp();
        residual = residual.max((out.0.values[i].re - want).abs());
        residual = residual.max(out.0.values[i].im.abs());
    }
    ctx.push("darboux.action", "non.6", hbar, 513, residual);

    // intertwiner derivative of the split form at ħ = 1
    if (hbar - 1.0).abs() < 1e-12 {
        let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 1024, 1.0, 0.2, 0.0);
        let h = 1e-4;
        let plus = darboux_apply(&g, h, DarbouxVariant::C2, &psi).expect("apply");
        let minus = darboux_apply(&g, -h, DarbouxVariant::C2, &psi).expect("apply");
        let s = &psi.0;
        let mut residual = 0.0f64;
        for i in 40..s.n - 40 {
            let y = s.x(i);
            let fd = (plus.0.interp(y).unwrap() - minus.0.interp(y).unwrap()) / (2.0 * h);
            let dpsi = (s.values[i + 1] - s.values[i - 1]) / (2.0 * s.dx());
            let want = dpsi + s.values[i] * y;
            residual = residual.max((fd - want).norm());
        }
        ctx.push("darboux.intertwiner", "non.7", 1.0, 1024, residual);
    }
}

fn check_unitarity_catalogue(ctx: &mut Ctx, hbar: f64) {
    let spec = GridSpec::square(2.0, 64, hbar).expect("grid");
    let th: f64 = 0.1;
    let entries: Vec<(&str, GridSymbol<f64>)> = vec![
        (
            "sl2.rotation",
            u_sl2(th.cos(), th.sin(), -th.sin(), th.cos(), &spec).expect("u"),
        ),
        (
            "gauge",
            u_gauge(&NamedFunc::Const { value: 1.0 }, 0.5, &spec).expect("u"),
        ),
        ("lp", u_linear_potential(0.2, &spec)),
    ];
    for (name, u) in entries {
        let r = unitarity_residual(&u).expect("residual");
        ctx.push(&format!("unitarity.catalogue.{name}"), "int.1", hbar, 64, r);
    }
    // the point-map kernel is the plain substitution operator: its star
    // unitarity defect equals the Jacobian deviation of the profile and
    // vanishes only toward the identity; report the trend rather than
    // asserting a unitary bound the unit-weight kernel cannot meet
    if (hbar - 1.0).abs() < 1e-12 {
        let mut rs = Vec::new();
        for alpha in [0.3, 0.1, 0.03] {
            let cspec = GridSpec::square(0.8, 48, hbar).expect("grid");
            let uc = u_contact(&NamedFunc::SinhScaled { alpha }, &cspec).expect("u");
            rs.push(unitarity_residual(&uc).expect("residual"));
        }
        let decreasing = rs.windows(2).all(|w| w[1] < w[0]);
        ctx.info(
            "open.contact.unitarity",
            "gct.9",
            rs[0],
            format!(
                "the unit-weight point kernel is the plain substitution operator; its star                  unitarity residual tracks the profile's Jacobian deviation                  (α = 0.3, 0.1, 0.03 give {:.2e}, {:.2e}, {:.2e}; decreasing: {})",
                rs[0], rs[1], rs[2], decreasing
            ),
        );
    }
}

fn check_contact(ctx: &mut Ctx, hbar: f64) {
    // implicit solve residuals across the named profiles
    let lattice: Vec<f64> = (0..101).map(|i| -2.0 + 4.0 * i as f64 / 100.0).collect();
    for (name, f) in [
        (
            "identity",
            NamedFunc::Poly {
                coeffs: vec![0.0, 1.0],
            },
        ),
        ("exp", NamedFunc::Exp),
        ("sinh", NamedFunc::SinhScaled { alpha: 0.7 }),
    ] {
        let sol = contact_solve(&f, &lattice).expect("solve");
        ctx.push(
            &format!("contact.implicit.{name}"),
            "gct.5a",
            hbar,
            101,
            sol.max_residual(),
        );
    }

    // actions: φ(Q⁻¹(y)) by interpolation
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, hbar, 1.5, 0.0);
    for (name, f, lo, hi) in [
        ("exp", NamedFunc::Exp, 0.5, 8.0),
        ("sinh", NamedFunc::SinhScaled { alpha: 0.6 }, -4.0, 4.0),
    ] {
        let k = contact_kernel(&f, Grid1::new(lo, hi, 256), hbar).expect("kernel");
        let out = k.apply_position(&psi).expect("apply").expect_position();
        let mut residual = 0.0f64;
        for i in 0..out.0.n {
            let y = out.0.x(i);
            let want = psi.0.interp(f.inverse(y).unwrap()).unwrap();
            residual = residual.max((out.0.values[i] - want).norm());
        }
        ctx.push(&format!("contact.action.{name}"), "gct.10", hbar, 256, residual);
    }

    // sinh family identity limit
    {
        let k = contact_kernel(
            &NamedFunc::SinhScaled { alpha: 1e-4 },
            Grid1::new(-6.0, 6.0, 256),
            hbar,
        )
        .expect("kernel");
        let out = k.apply_position(&psi).expect("apply").expect_position();
        let mut residual = 0.0f64;
        for i in 0..out.0.n {
            let y = out.0.x(i);
            residual = residual.max((out.0.values[i] - psi.0.interp(y).unwrap()).norm());
        }
        ctx.push("contact.sinh.limit", "gct.10", hbar, 256, residual);
    }
}

fn check_dec3(ctx: &mut Ctx, hbar: f64) {
    let a = 0.02;
    let spec = GridSpec::square(1.2, 48, hbar).expect("grid");
    let u_lp = u_linear_potential(a, &spec);
    let u_f = fourier_u(&spec).expect("u");
    let comp = compose_u(&u_lp, &u_f, 8).expect("compose");
    let m = MapSpec::dec1(a);
    let (rq, rp) =
        kernel_residual(&comp.value, &m, comp.interior_band).expect("residual");
    ctx.push("dec3.compose", "dec.3", hbar, 48, rq.max(rp));
}

fn check_commuting_diagram(ctx: &mut Ctx, hbar: f64, n: usize) {
    // gauge map: transform the state and re-derive the symbol, against the
    // generator flow applied to the original symbol
    let tau = 0.8;
    let lam = 1.5;
    let psi = Wavefunction::<f64>::gaussian(-12.0, 12.0, 512, hbar, 0.0, 0.0);
    let k = gauge_kernel(
        &NamedFunc::Const { value: lam },
        tau,
        Grid1::new(-12.0, 12.0, 512),
        hbar,
    )
    .expect("kernel");
    let phi = k.apply_position(&psi).expect("apply").expect_position();
    let spec = GridSpec::square(4.0, n, hbar).expect("grid");
    let w_hilbert = wigner_transform(&phi, &spec).expect("wigner");
    let w0 = wigner_transform(&psi, &spec).expect("wigner");
    // flow side: generator image of ∫A = λq̂ word is −iħλ∂p; the state
    // transforms with e^{−iγV}
    let gen = bopp_image(&Word::q_hat());
    let flowed = propagator_apply_flow(&gen, -tau * lam / hbar, &w0).expect("flow");
    let d = w_hilbert.interior_max_diff(&flowed, 8).expect("diff");
    ctx.push("diagram.gauge", "corr.9", hbar, n, d);
}

fn check_closure(ctx: &mut Ctx) {
    // gauge–gauge commutators vanish identically
    let a = Word::poly_in_q(&[0, 0, 1]);
    let b = Word::poly_in_q(&[0, 0, 0, 5]);
    let gg = bopp_image(&a.commutator(&b));
    ctx.push(
        "closure.gauge_gauge",
        "seq.1",
        0.0,
        0,
        if gg.is_zero() { 0.0 } else { 1.0 },
    );

    // gauge–contact commutators are gauge-type with a solvable function
    let mut worst = 0.0f64;
    for (gauge_coeffs, contact_coeffs) in [
        (vec![0i64, 0, 0, 1], vec![0i64, 1]),
        (vec![0, 0, 1], vec![1, 0, 1]),
        (vec![0, 1, 0, 0, 2], vec![0, 0, 1]),
    ] {
        let g = Word::poly_in_q(&gauge_coeffs);
        let c = Word::contact_generator(&contact_coeffs);
        let rep = image_commutator_check(&g, &c, 4, true);
        if !rep.homomorphism_ok {
            worst += 1.0;
        }
        let (_, residual) = rep.gauge_solution.map(|(c, r)| (c, r)).unwrap_or((vec![], 1.0));
        worst += residual;
    }
    ctx.push("closure.gauge_contact", "seq.1", 0.0, 4, worst);

    // operator-level solve shown directly once more for the report
    let g = Word::poly_in_q(&[0, 0, 0, 1]);
    let c = Word::contact_generator(&[0, 1]);
    let target = bopp_image(&g.commutator(&c));
    let (_, residual) = solve_gauge_function(&target, 6);
    ctx.push("closure.gauge_contact.solve", "seq.1", 0.0, 6, residual);
}

fn check_open_questions(ctx: &mut Ctx) {
    // conflicting quarter-turn prefactors, discriminated by star unitarity
    let spec = GridSpec::square(2.0, 64, 1.0).expect("grid");
    let u_family = fourier_u(&spec).expect("u");
    let r_family = unitarity_residual(&u_family).expect("residual");
    let u_alt = u_family.scale(C64::new(
        weylkit::maps::FOURIER_PREFACTOR_ALTERNATE / weylkit::maps::FOURIER_PREFACTOR_FAMILY,
        0.0,
    ));
    let r_alt = unitarity_residual(&u_alt).expect("residual");
    ctx.info(
        "open.ft2.prefactor",
        "ft.2",
        r_family,
        format!(
            "quarter-turn kernel prefactor: the family normalization 2/√2 has star-unitarity \
             residual {r_family:.3e}; the alternate 1/√2 has {r_alt:.3e}; the family value wins"
        ),
    );

    // raw point-map front factor vs the calibrated one
    ctx.info(
        "open.gct.normalization",
        "gct.6",
        0.5,
        "the raw implicit-solution front factor makes the identity point map give u = 1/2 \
         while its field action is exactly the identity; the kernel scalar is fixed to 2 so \
         the identity map gives u = 1"
            .into(),
    );

    // the explicitly quoted closed form for the rational point map
    let samples: Vec<f64> = (0..40).map(|i| -0.8 + 1.6 * i as f64 / 39.0).collect();
    let (quoted, derived) = rational_contact_residuals(0.5, &samples);
    ctx.info(
        "open.rational.contact",
        "gct.5a",
        quoted,
        format!(
            "quoted closed form for the rational point map leaves implicit-equation residual \
             {quoted:.3e}; the directly solved quadratic branch leaves {derived:.3e}"
        ),
    );
}

/// Run the suite. `selection` filters by check-id prefix (empty = all);
/// numeric checks run at every ħ in `hbars` and at grid sizes `n` and
/// `n/2` (bounded below).
pub fn verify_suite(
    selection: &[String],
    hbars: &[f64],
    grid: usize,
    tol_scale: f64,
    seed: u64,
) -> VerificationReport {
    let mut ctx = Ctx {
        checks: Vec::new(),
        tol_scale,
        seed,
    };

    // exact layer: ħ-independent by construction
    check_ccr_exact(&mut ctx);
    check_ccr_grading(&mut ctx);
    check_star_associativity(&mut ctx);
    check_flow_riccati(&mut ctx);
    check_images(&mut ctx);
    check_closure(&mut ctx);
    check_ccr_lattice(&mut ctx);

    let grids = [grid, (grid / 2).max(48)];
    for &hbar in hbars {
        for &n in &grids {
            check_kernel_pdes(&mut ctx, hbar, n);
            check_wigner(&mut ctx, hbar, n);
            check_u30(&mut ctx, hbar, n);
            check_propagator_routes(&mut ctx, hbar, n);
            check_generating_t(&mut ctx, hbar, n);
            check_commuting_diagram(&mut ctx, hbar, n);
        }
        check_sl2_position_kernel(&mut ctx, hbar);
        check_lp_mixed_kernel(&mut ctx, hbar);
        check_gauge_action(&mut ctx, hbar);
        check_darboux(&mut ctx, hbar);
        check_unitarity_catalogue(&mut ctx, hbar);
        check_contact(&mut ctx, hbar);
        check_dec3(&mut ctx, hbar);
    }
    check_sl2_identity_limit(&mut ctx);
    check_open_questions(&mut ctx);

    let mut checks = ctx.checks;
    if !selection.is_empty() {
        checks.retain(|c| selection.iter().any(|s| c.check_id.starts_with(s.as_str())));
    }
    let overall_pass = checks.iter().filter(|c| !c.informational).all(|c| c.pass);
    VerificationReport {
        environment: Environment {
            hbars: hbars.to_vec(),
            grids: grids.to_vec(),
            seed,
            tol_scale,
        },
        checks,
        overall_pass,
    }
}
