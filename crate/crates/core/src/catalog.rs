//! Named fixture systems with known solutions and identities, checked at load.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::dsl::parse_expression;
use crate::error::{Error, Result};
use crate::finder::build_231;
use crate::generate::{
    direct_sum, direct_sum_lift, general_solution_221, idempotents_m2, mu_power_table, univariate_at,
    univariate_derivative,
};
use crate::mu_ring::{companion, reduce, star_mul, star_pow, MonicZ, MuPoly, SolutionVec};
use crate::numeric::{grid_residuals, NumericCandidate, NumericSystem, PointData};
use crate::system::{
    admits_multiplication, check_fmg, derivative_coefficients, equivalent_systems, verify_solution,
    SystemSpec, TensorPoly,
};

/// A checked equality attached to a fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub holds: bool,
}

impl Identity {
    fn new(label: impl Into<String>, holds: bool) -> Self {
        Identity {
            label: label.into(),
            holds,
        }
    }
}

/// A solution known only through point evaluation.
#[derive(Clone)]
pub struct NumericSolution {
    pub label: String,
    pub eval: Arc<NumericCandidate>,
}

#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    /// Absent for systems whose coefficients leave the rational-function field.
    pub sys: Option<SystemSpec>,
    pub coords: Vars,
    pub numeric: NumericSystem,
    pub known_solutions: Vec<(String, SolutionVec)>,
    pub numeric_solutions: Vec<NumericSolution>,
    pub identities: Vec<Identity>,
    /// Coordinate box on which the fixture is regular.
    pub domain: Vec<(f64, f64)>,
}

impl std::fmt::Debug for Fixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fixture")
            .field("name", &self.name)
            .field("sys", &self.sys)
            .field("known_solutions", &self.known_solutions)
            .field("identities", &self.identities)
            .finish_non_exhaustive()
    }
}

impl Fixture {
    pub fn is_symbolic(&self) -> bool {
        self.sys.is_some()
    }

    /// The perturbed, non-admissible companion system.
    pub fn broken(&self) -> Result<BrokenFixture> {
        match &self.sys {
            Some(s) => Ok(BrokenFixture::Symbolic(broken_variant(s)?)),
            None => {
                let inner = self.numeric.clone();
                Ok(BrokenFixture::Numeric(NumericSystem::new(inner.n, inner.m, move |p| {
                    let mut d = inner.at(p)?;
                    d.a[0][0][0] += 1.0;
                    Ok(d)
                })))
            }
        }
    }

    /// Points drawn from the domain box, deterministic in `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| self.domain.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect())
            .collect()
    }
}

pub enum BrokenFixture {
    Symbolic(SystemSpec),
    Numeric(NumericSystem),
}

/// `A₀[0][0] + 1`; when `Z` is constant this is still admissible, so the
/// first coordinate is added to `Z₀` as well.
pub fn broken_variant(sys: &SystemSpec) -> Result<SystemSpec> {
    let vars = sys.vars();
    let mut mats = sys.a().mats().to_vec();
    let bumped = mats[0].get(0, 0) + &Rf::one(vars);
    mats[0].set(0, 0, bumped);
    let a = TensorPoly::new(mats)?;
    let name = format!("{}-broken", sys.name());
    let s = SystemSpec::new(&name, vars, sys.z().clone(), a.clone())?;
    if !admits_multiplication(&s) {
        return Ok(s);
    }
    let mut lower = sys.z().lower().to_vec();
    lower[0] = &lower[0] + &Rf::var(vars, 0);
    let s = SystemSpec::new(&name, vars, MonicZ::new(vars, lower)?, a)?;
    if admits_multiplication(&s) {
        return Err(Error::FixtureInvariant {
            name: sys.name().into(),
            detail: "perturbation stays admissible".into(),
        });
    }
    Ok(s)
}

const NAMES: &[&str] = &[
    "cauchy-riemann",
    "generic-221",
    "generic-221-eigen",
    "generic-mm1-2",
    "generic-mm1-3",
    "generic-mm1-4",
    "generic-mm1-5",
    "generic-321",
    "generic-231(1)",
    "generic-231(2)",
    "generic-231(-1/3)",
    "findex",
    "jodeit-4d",
];

pub fn fixture_names() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Loads a fixture and verifies all of its invariants.
pub fn load_fixture(name: &str) -> Result<Fixture> {
    let fx = match name {
        "cauchy-riemann" => cauchy_riemann_fixture()?,
        "generic-221" => generic_221_fixture()?,
        "generic-221-eigen" => eigen_fixture()?,
        "generic-mm1" => generic_mm1_fixture(3)?,
        "generic-321" => generic_321_fixture()?,
        "generic-231" => generic_231_fixture(&Rational::from_integer(1.into()))?,
        "findex" => findex_fixture()?,
        "jodeit-4d" => jodeit_fixture()?,
        _ => {
            if let Some(m) = name.strip_prefix("generic-mm1-").and_then(|s| s.parse::<usize>().ok()) {
                if (2..=5).contains(&m) {
                    generic_mm1_fixture(m)?
                } else {
                    return Err(unknown(name));
                }
            } else if let Some(a) = name
                .strip_prefix("generic-231(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.parse::<Rational>().ok())
            {
                generic_231_fixture(&a)?
            } else {
                return Err(unknown(name));
            }
        }
    };
    validate(&fx)?;
    Ok(fx)
}

fn unknown(name: &str) -> Error {
    Error::UnknownFixture {
        name: name.into(),
        available: NAMES.join(", "),
    }
}

fn invariant(fx: &Fixture, detail: String) -> Error {
    Error::FixtureInvariant {
        name: fx.name.clone(),
        detail,
    }
}

fn validate(fx: &Fixture) -> Result<()> {
    if let Some(s) = &fx.sys {
        if !admits_multiplication(s) {
            return Err(invariant(fx, "system is not admissible".into()));
        }
        for (label, v) in &fx.known_solutions {
            if !verify_solution(s, v)? {
                return Err(invariant(fx, format!("`{label}` is not a solution")));
            }
        }
    }
    let pts = fx.sample(12, 7);
    for sol in &fx.numeric_solutions {
        let g = grid_residuals(&fx.numeric, sol.eval.as_ref(), &pts, 1e-6)?;
        if !(g.worst_residual < 1e-6) {
            return Err(invariant(
                fx,
                format!("`{}` has residual {:e}", sol.label, g.worst_residual),
            ));
        }
    }
    if let Some(id) = fx.identities.iter().find(|i| !i.holds) {
        return Err(invariant(fx, format!("identity `{}` fails", id.label)));
    }
    Ok(())
}

fn xy() -> Vars {
    Vars::new(&["x", "y"]).expect("distinct names")
}

fn expr(text: &str, vars: &Vars) -> Rf {
    parse_expression(text, vars).expect("fixture expression")
}

fn sol(texts: &[&str], vars: &Vars) -> Result<SolutionVec> {
    SolutionVec::new(texts.iter().map(|t| expr(t, vars)).collect())
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn fixture(name: &str, description: &str, sys: SystemSpec, domain: Vec<(f64, f64)>) -> Fixture {
    Fixture {
        name: name.into(),
        description: description.into(),
        numeric: NumericSystem::from_spec(&sys),
        coords: sys.vars().clone(),
        sys: Some(sys),
        known_solutions: Vec::new(),
        numeric_solutions: Vec::new(),
        identities: Vec::new(),
        domain,
    }
}

fn powers(sys: &SystemSpec, lo: i64, hi: i64) -> Result<Vec<(String, SolutionVec)>> {
    Ok(mu_power_table(sys, lo, hi)?.members)
}

/// `Z = 1 + μ²`, `A₀ = [[0, 1], [−1, 0]]`, `A₁ = I`.
pub fn cauchy_riemann() -> Result<SystemSpec> {
    cauchy_riemann_on(&xy())
}

fn cauchy_riemann_on(v: &Vars) -> Result<SystemSpec> {
    let (zero, one) = (Rf::zero(v), Rf::one(v));
    let z = MonicZ::new(v, vec![one.clone(), zero.clone()])?;
    let a0 = RfMatrix::from_rows(v, vec![vec![zero.clone(), one.clone()], vec![one.neg(), zero]])?;
    SystemSpec::new("cauchy-riemann", v, z, TensorPoly::new(vec![a0, RfMatrix::identity(v, 2)])?)
}

/// `(Re, Im)` of `(x + iy)ʳ` by binomial expansion.
pub fn complex_power(vars: &Vars, r: u32) -> SolutionVec {
    let (x, y) = (Rf::var(vars, 0), Rf::var(vars, 1));
    let mut re = Rf::zero(vars);
    let mut im = Rf::zero(vars);
    let mut binom = num_bigint::BigInt::from(1);
    for k in 0..=r {
        let term = (&x.pow(r - k) * &y.pow(k)).scale(&Rational::from_integer(binom.clone()));
        match k % 4 {
            0 => re = &re + &term,
            1 => im = &im + &term,
            2 => re = &re - &term,
            _ => im = &im - &term,
        }
        binom = binom * (r - k) / (k + 1);
    }
    SolutionVec::new(vec![re, im]).expect("two entries")
}

fn cauchy_riemann_fixture() -> Result<Fixture> {
    let s = cauchy_riemann()?;
    let v = s.vars().clone();
    let mut fx = fixture(
        "cauchy-riemann",
        "Cauchy-Riemann equations as a quotient by 1 + mu^2",
        s.clone(),
        vec![(-2.0, 2.0), (-2.0, 2.0)],
    );
    fx.known_solutions = powers(&s, -2, 3)?;
    for r in 1..=4 {
        fx.known_solutions.push((format!("(x + iy)^{r}"), complex_power(&v, r)));
    }
    let a = complex_power(&v, 1);
    let b = sol(&["x^2 - y^2 + 3", "2*x*y - x"], &v)?;
    let prod = star_mul(&a.to_mupoly(), &b.to_mupoly(), s.z())?;
    let (a0, a1, b0, b1) = (&a.entries()[0], &a.entries()[1], &b.entries()[0], &b.entries()[1]);
    let expected = MuPoly::from_coeffs(&v, vec![&(a0 * b0) - &(a1 * b1), &(a0 * b1) + &(a1 * b0)]);
    fx.identities.push(Identity::new("complex product formula", prod == expected));
    Ok(fx)
}

/// Generic coordinates `x = Z₀`, `y = Z₁` with `A₀ = −C`, `A₁ = I`.
pub fn generic_221() -> Result<SystemSpec> {
    generic_mm1_with(&xy(), "generic-221")
}

/// `(m, m, 1)` in generic coordinates `q1…qm`.
pub fn generic_mm1(m: usize) -> Result<SystemSpec> {
    let names: Vec<String> = (1..=m).map(|i| format!("q{i}")).collect();
    generic_mm1_with(&Vars::new(&names)?, &format!("generic-mm1-{m}"))
}

fn generic_mm1_with(vars: &Vars, name: &str) -> Result<SystemSpec> {
    let m = vars.len();
    let z = MonicZ::new(vars, (0..m).map(|i| Rf::var(vars, i)).collect())?;
    let c = companion(&z).entries;
    let a0 = c.scale_q(&q(-1));
    SystemSpec::new(name, vars, z, TensorPoly::new(vec![a0, RfMatrix::identity(vars, m)])?)
}

/// Rows of the power table for `μ⁻²…μ³` in `generic-221`.
pub const POWER_TABLE_221: [&str; 6] = [
    "((-x + y^2)/x^2, y/x^2)",
    "(-y/x, -1/x)",
    "(1, 0)",
    "(0, 1)",
    "(-x, -y)",
    "(x*y, -x + y^2)",
];

fn generic_221_fixture() -> Result<Fixture> {
    let s = generic_221()?;
    let v = s.vars().clone();
    let mut fx = fixture(
        "generic-221",
        "n = m = 2, k = 1 in the chart x = Z0, y = Z1",
        s.clone(),
        vec![(0.5, 2.0), (0.5, 2.0)],
    );
    fx.known_solutions = powers(&s, -2, 4)?;
    let table: Vec<String> = fx.known_solutions[..6].iter().map(|(_, v)| v.to_string()).collect();
    fx.identities.push(Identity::new("power table", table == POWER_TABLE_221));
    // dV0/dx = y dV1/dx + dV1/dy and dV0/dy = -x dV1/dx
    let expected = RfMatrix::from_rows(
        &v,
        vec![
            vec![Rf::one(&v), Rf::zero(&v), expr("-y", &v), expr("-1", &v)],
            vec![Rf::zero(&v), Rf::one(&v), expr("x", &v), Rf::zero(&v)],
        ],
    )?;
    fx.identities.push(Identity::new(
        "component equations",
        same_row_space(&derivative_coefficients(&s)?, &expected)?,
    ));
    Ok(fx)
}

fn same_row_space(a: &RfMatrix, b: &RfMatrix) -> Result<bool> {
    let ra = a.rank()?;
    if ra != b.rank()? {
        return Ok(false);
    }
    let mut rows = a.to_rows();
    rows.extend(b.to_rows());
    Ok(RfMatrix::from_rows(a.vars(), rows)?.rank()? == ra)
}

/// Root chart: `Z = (μ − x)(μ − y)`, `A₀ = −diag(x, y)`, `A₁ = I`.
pub fn generic_221_eigen() -> Result<SystemSpec> {
    let v = xy();
    let (x, y) = (Rf::var(&v, 0), Rf::var(&v, 1));
    let z = MonicZ::new(&v, vec![&x * &y, (&x + &y).neg()])?;
    let a0 = RfMatrix::from_rows(&v, vec![vec![x.neg(), Rf::zero(&v)], vec![Rf::zero(&v), y.neg()]])?;
    SystemSpec::new("generic-221-eigen", &v, z, TensorPoly::new(vec![a0, RfMatrix::identity(&v, 2)])?)
}

fn eigen_fixture() -> Result<Fixture> {
    let s = generic_221_eigen()?;
    let v = s.vars().clone();
    let mut fx = fixture(
        "generic-221-eigen",
        "generic (2,2,1) in the chart of its eigenvalues x, y",
        s.clone(),
        vec![(0.1, 1.0), (1.2, 2.0)],
    );
    fx.known_solutions = powers(&s, 0, 3)?;
    let polys: [(&str, Vec<Rational>, Vec<Rational>); 3] = [
        ("phi = t^2, psi = t", vec![q(0), q(0), q(1)], vec![q(0), q(1)]),
        ("phi = 1 - t^3, psi = 2t^2", vec![q(1), q(0), q(0), q(-1)], vec![q(0), q(0), q(2)]),
        ("phi = t^4, psi = 0", vec![q(0), q(0), q(0), q(0), q(1)], vec![]),
    ];
    for (label, phi, psi) in polys {
        fx.known_solutions.push((label.into(), general_solution_221(&v, &phi, &psi)?));
    }
    let (ep, em) = idempotents_m2(&s)?;
    fx.known_solutions.push(("e+".into(), ep.clone()));
    fx.known_solutions.push(("e-".into(), em.clone()));
    let (a, b) = (ep.to_mupoly(), em.to_mupoly());
    fx.identities.push(Identity::new("e+ * e+ = e+", star_mul(&a, &a, s.z())? == a));
    fx.identities.push(Identity::new("e- * e- = e-", star_mul(&b, &b, s.z())? == b));
    fx.identities.push(Identity::new("e+ * e- = 0", star_mul(&a, &b, s.z())?.is_zero()));
    fx.identities.push(Identity::new("e+ + e- = 1", a.add(&b) == MuPoly::one(&v)));
    Ok(fx)
}

/// Closed forms of `μᵐ`, `μ^{m+1}`, `μ^{m+2}` in generic coordinates.
pub fn mm1_power_closed_forms(vars: &Vars) -> [SolutionVec; 3] {
    let m = vars.len();
    let qv = |i: usize| if i == 0 { Rf::zero(vars) } else { Rf::var(vars, i - 1) };
    let qm = qv(m);
    let top = &qv(m - 1) - &(&qm * &qm);
    let pm: Vec<Rf> = (1..=m).map(|i| qv(i).neg()).collect();
    let pm1: Vec<Rf> = (1..=m).map(|i| &qv(i - 1).neg() + &(&qv(i) * &qm)).collect();
    let pm2: Vec<Rf> = (1..=m)
        .map(|i| {
            let prev = if i == 1 {
                Rf::zero(vars)
            } else {
                &qv(i - 2).neg() + &(&qv(i - 1) * &qm)
            };
            &prev + &(&qv(i) * &top)
        })
        .collect();
    [pm, pm1, pm2].map(|e| SolutionVec::new(e).expect("nonempty"))
}

fn generic_mm1_fixture(m: usize) -> Result<Fixture> {
    let s = generic_mm1(m)?;
    let v = s.vars().clone();
    let mut fx = fixture(
        &format!("generic-mm1-{m}"),
        "CV' = V'C in the chart q^i = Z_(i-1)",
        s.clone(),
        vec![(0.5, 1.5); m],
    );
    fx.known_solutions = powers(&s, 0, m as i64 + 2)?;
    fx.known_solutions.push(("V_i = Z_i".into(), s.z_vector()));
    let closed = mm1_power_closed_forms(&v);
    let matches = (0..3).all(|i| fx.known_solutions[m + i].1 == closed[i]);
    fx.identities.push(Identity::new("power list", matches));
    // A₂ = I, A₁ = B constant, A₀ = −C² − CB satisfies Σ CⁱAᵢ = 0
    let c = companion(s.z()).entries;
    let b = RfMatrix::from_fn(&v, m, m, |i, j| Rf::from_int(&v, ((i * 3 + j * 5) % 4) as i64 - 1));
    let a0 = (c.mul(&c)?.add(&c.mul(&b)?)?).scale_q(&q(-1));
    let mmk = SystemSpec::new("mmk", &v, s.z().clone(), TensorPoly::new(vec![a0, b, RfMatrix::identity(&v, m)])?)?;
    let mut ok = admits_multiplication(&mmk);
    for (_, sv) in &fx.known_solutions {
        ok &= verify_solution(&mmk, sv)?;
    }
    fx.identities.push(Identity::new("solutions also solve (m,m,2)", ok));
    Ok(fx)
}

/// `Z = x + yμ + μ²` on `(x, y, z)` with third row `(a, a(c − y), c)` of `A₀`
/// and `c = (y ± √(y² − 4x))/2`. Evaluated numerically only.
pub fn generic_321(a: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, plus: bool) -> NumericSystem {
    NumericSystem::new(3, 2, move |p: &[f64]| {
        if p.len() != 3 {
            return Err(Error::Dimension("generic-321 has three coordinates".into()));
        }
        let (x, y) = (p[0], p[1]);
        let disc = y * y - 4.0 * x;
        if disc < 0.0 {
            return Err(Error::Invalid("y^2 - 4x < 0: off the real branch".into()));
        }
        let root = disc.sqrt();
        let c = if plus { (y + root) / 2.0 } else { (y - root) / 2.0 };
        let av = a(p);
        let a0 = vec![
            vec![0.0, x, 0.0],
            vec![-1.0, y, 0.0],
            vec![av, av * (c - y), c],
        ];
        let mut a1 = vec![vec![0.0; 3]; 3];
        for (i, row) in a1.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Ok(PointData {
            z: vec![x, y],
            a: vec![a0, a1],
        })
    })
}

/// Embeds an exact solution in `(x, y)` as a numeric solution on `(x, y, z)`.
fn embed_221(label: String, v: SolutionVec) -> NumericSolution {
    NumericSolution {
        label,
        eval: Arc::new(move |p: &[f64]| {
            v.entries()
                .iter()
                .map(|e| crate::numeric::eval_rf(e, &p[..2]))
                .collect()
        }),
    }
}

fn generic_321_fixture() -> Result<Fixture> {
    let s221 = generic_221()?;
    let mut fx = Fixture {
        name: "generic-321".into(),
        description: "n = 3, m = 2, k = 1 with a(x,y,z) = 1 + z and the + branch of c".into(),
        sys: None,
        coords: Vars::new(&["x", "y", "z"])?,
        numeric: generic_321(|p| 1.0 + p[2], true),
        known_solutions: Vec::new(),
        numeric_solutions: Vec::new(),
        identities: Vec::new(),
        domain: vec![(0.1, 0.5), (2.0, 3.0), (-1.0, 1.0)],
    };
    for (label, v) in powers(&s221, -1, 3)? {
        fx.numeric_solutions.push(embed_221(format!("(2,2,1) {label}"), v));
    }
    let spec = crate::series::SeriesSpec::exp();
    fx.numeric_solutions.push(NumericSolution {
        label: "(2,2,1) exp series".into(),
        eval: Arc::new(move |p: &[f64]| Ok(crate::series::sum_direct(&spec, &p[..2])?.0)),
    });
    Ok(fx)
}

fn generic_231_fixture(a: &Rational) -> Result<Fixture> {
    let s = build_231(a)?;
    let v = s.vars().clone();
    let mut fx = fixture(
        s.name(),
        "n = 2, m = 3, k = 1 with Z2 = a y - a^2 x + 1/a",
        s.clone(),
        vec![(-1.0, 1.0), (-1.0, 1.0)],
    );
    fx.known_solutions = powers(&s, 0, 4)?;
    let mu = s.mu();
    let p = star_mul(&mu, &star_pow(&mu, 2, s.z())?, s.z())?;
    let (x, y) = (Rf::var(&v, 0), Rf::var(&v, 1));
    let third = &(&x.scale(&(a * a)) - &y.scale(a)) - &Rf::constant(&v, a.recip());
    let expected = MuPoly::from_coeffs(&v, vec![x.neg(), y.neg(), third]);
    fx.identities.push(Identity::new("mu * mu^2", p == expected));
    Ok(fx)
}

/// `Z = x + yμ + xyμ² + μ³` with `A₁ = [[(x²y+1)f, (x²y+1)g], [x(1−y²)f, x(1−y²)g]]`
/// and `A₀ = [[xy, x²], [y²−1, xy]]·A₁`.
pub fn findex(f: &Rf, g: &Rf) -> Result<SystemSpec> {
    let v = xy();
    let z = MonicZ::new(&v, vec![expr("x", &v), expr("y", &v), expr("x*y", &v)])?;
    let (u, w) = (expr("x^2*y + 1", &v), expr("x*(1 - y^2)", &v));
    let a1 = RfMatrix::from_rows(&v, vec![vec![&u * f, &u * g], vec![&w * f, &w * g]])?;
    let p = RfMatrix::from_rows(
        &v,
        vec![
            vec![expr("x*y", &v), expr("x^2", &v)],
            vec![expr("y^2 - 1", &v), expr("x*y", &v)],
        ],
    )?;
    let a0 = p.mul(&a1)?;
    SystemSpec::new("findex", &v, z, TensorPoly::new(vec![a0, a1])?)
}

/// Reference equations of the system, as coefficients of
/// `∂ₓV₀, ∂_yV₀, ∂ₓV₁, ∂_yV₁, ∂ₓV₂, ∂_yV₂`.
pub fn findex_equations(vars: &Vars) -> Result<RfMatrix> {
    let rows = [
        ["x*(y + x^2)", "y^2 - 1", "0", "0", "-x*(1 + x^2*y)", "x^2*(y^2 - 1)"],
        ["1 + x^2*y", "x*(1 - y^2)", "x*(y + x^2)", "y^2 - 1", "-y*(1 + x^2*y)", "x*y*(y^2 - 1)"],
        ["0", "0", "1 + x^2*y", "x*(1 - y^2)", "x^3*(1 - y^2)", "(y^2 - 1)*(x^2*y + 1)"],
    ];
    RfMatrix::from_rows(
        vars,
        rows.iter().map(|r| r.iter().map(|t| expr(t, vars)).collect()).collect(),
    )
}

fn findex_fixture() -> Result<Fixture> {
    let v = xy();
    let s = findex(&Rf::one(&v), &Rf::zero(&v))?;
    let mut fx = fixture(
        "findex",
        "the unique (2,3,1) system for Z = x + y mu + x y mu^2 + mu^3",
        s.clone(),
        vec![(0.2, 1.0), (0.2, 1.0)],
    );
    fx.known_solutions = powers(&s, 0, 4)?;
    let mut same = true;
    for (f, g) in [("0", "1"), ("x", "y^2 + 1"), ("1/(1 + x^2)", "-3")] {
        same &= equivalent_systems(&s, &findex(&expr(f, &v), &expr(g, &v))?)?;
    }
    fx.identities.push(Identity::new("independent of f and g", same));
    fx.identities.push(Identity::new(
        "reference equations",
        same_row_space(&derivative_coefficients(&s)?, &findex_equations(&v)?)?,
    ));
    let a = fx.known_solutions[2].1.clone();
    let b = fx.known_solutions[4].1.clone();
    let (z0, z1, z2) = (s.z().coeff(0), s.z().coeff(1), s.z().coeff(2));
    let (v0, v1, v2) = (&a.entries()[0], &a.entries()[1], &a.entries()[2]);
    let (w0, w1, w2) = (&b.entries()[0], &b.entries()[1], &b.entries()[2]);
    let e0 = &(&(&(v0 * w0) - &(z0 * &(v1 * w2))) - &(z0 * &(v2 * w1))) + &(&(z0 * z2) * &(v2 * w2));
    let e1 = &(&(&(&(v0 * w1) + &(v1 * w0)) - &(z1 * &(v1 * w2))) - &(z1 * &(v2 * w1)))
        + &(&(&z0.neg() + &(z1 * z2)) * &(v2 * w2));
    let e2 = &(&(&(&(&(v0 * w2) + &(v1 * w1)) + &(v2 * w0)) - &(z2 * &(v1 * w2))) - &(z2 * &(v2 * w1)))
        + &(&(&z1.neg() + &(z2 * z2)) * &(v2 * w2));
    let prod = star_mul(&a.to_mupoly(), &b.to_mupoly(), s.z())?;
    fx.identities.push(Identity::new(
        "m = 3 product formula",
        prod == MuPoly::from_coeffs(&v, vec![e0, e1, e2]),
    ));
    Ok(fx)
}

/// `Z = μ²`, `A₀ = [[0, 0], [−1, 0]]`, `A₁ = I` on `(x1, x2)`.
pub fn jodeit_2d() -> Result<SystemSpec> {
    let v = Vars::new(&["x1", "x2"])?;
    let z = MonicZ::new(&v, vec![Rf::zero(&v), Rf::zero(&v)])?;
    let a0 = RfMatrix::from_rows(
        &v,
        vec![vec![Rf::zero(&v), Rf::zero(&v)], vec![Rf::from_int(&v, -1), Rf::zero(&v)]],
    )?;
    SystemSpec::new("jodeit", &v, z, TensorPoly::new(vec![a0, RfMatrix::identity(&v, 2)])?)
}

/// `(ψ(x₁), x₂ψ′(x₁) + φ(x₁))` for polynomial `ψ`, `φ`.
pub fn jodeit_solution(vars: &Vars, psi: &[Rational], phi: &[Rational]) -> Result<SolutionVec> {
    let x2 = Rf::var(vars, 1);
    let v0 = univariate_at(psi, vars, 0);
    let v1 = &(&x2 * &univariate_at(&univariate_derivative(psi), vars, 0)) + &univariate_at(phi, vars, 0);
    SolutionVec::new(vec![v0, v1])
}

/// `Σᵣ (aᵣ + μbᵣ) * (x₁ + μx₂)ʳ_*` with `ψ = Σ aᵣ sʳ`, `φ = Σ bᵣ sʳ`.
pub fn jodeit_series(sys: &SystemSpec, psi: &[Rational], phi: &[Rational]) -> Result<MuPoly> {
    let v = sys.vars();
    let base = MuPoly::from_coeffs(v, vec![Rf::var(v, 0), Rf::var(v, 1)]);
    let mut acc = MuPoly::zero(v);
    let mut power = MuPoly::one(v);
    for r in 0..psi.len().max(phi.len()) {
        let a = psi.get(r).cloned().unwrap_or_else(|| q(0));
        let b = phi.get(r).cloned().unwrap_or_else(|| q(0));
        let c = MuPoly::from_rationals(v, &[a, b]);
        acc = acc.add(&star_mul(&reduce(&c, sys.z()), &power, sys.z())?);
        power = star_mul(&power, &base, sys.z())?;
    }
    Ok(acc)
}

/// Checks the series representation and `∇f = M∇g` for one pair `ψ`, `φ`.
pub fn jodeit_identity(psi: &[Rational], phi: &[Rational]) -> Result<bool> {
    let s = jodeit_2d()?;
    let v = jodeit_solution(s.vars(), psi, phi)?;
    let series = jodeit_series(&s, psi, phi)?;
    let m = vec![vec![q(0), q(1)], vec![q(0), q(0)]];
    Ok(series == v.to_mupoly()
        && verify_solution(&s, &v)?
        && check_fmg(&m, &v.entries()[0], &v.entries()[1])?)
}

fn jodeit_fixture() -> Result<Fixture> {
    let j = jodeit_2d()?;
    let cr = cauchy_riemann_on(&Vars::new(&["x3", "x4"])?)?;
    let s = direct_sum(&j, &cr)?.with_name("jodeit-4d");
    let mut fx = fixture(
        "jodeit-4d",
        "grad f = M grad g with M = J2(0) + rotation, as a direct sum",
        s.clone(),
        vec![(-1.0, 1.0); 4],
    );
    let pairs: [(&str, Vec<Rational>, Vec<Rational>); 3] = [
        ("psi = t^2, phi = t^3", vec![q(0), q(0), q(1)], vec![q(0), q(0), q(0), q(1)]),
        ("psi = 1 + t^5, phi = t", vec![q(1), q(0), q(0), q(0), q(0), q(1)], vec![q(0), q(1)]),
        ("psi = 2t, phi = -t^4", vec![q(0), q(2)], vec![q(0), q(0), q(0), q(0), q(-1)]),
    ];
    let crv = cr.vars().clone();
    for (r, (label, psi, phi)) in pairs.iter().enumerate() {
        let f1 = jodeit_solution(j.vars(), psi, phi)?;
        let f2 = complex_power(&crv, r as u32 + 1);
        fx.known_solutions.push((
            format!("{label} with (x3 + i x4)^{}", r + 1),
            direct_sum_lift(&j, &cr, &s, &f1, &f2)?,
        ));
        fx.identities.push(Identity::new(
            format!("series representation, {label}"),
            jodeit_identity(psi, phi)?,
        ));
    }
    fx.known_solutions.extend(powers(&s, 0, 5)?);
    Ok(fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for name in fixture_names() {
            let fx = load_fixture(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(fx.name, name);
        }
        assert!(load_fixture("generic-mm1").is_ok());
    }

    #[test]
    fn unknown_name_lists_catalog() {
        match load_fixture("nope") {
            Err(Error::UnknownFixture { available, .. }) => assert!(available.contains("findex")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broken_variants_fail() {
        for name in fixture_names() {
            let fx = load_fixture(name).unwrap();
            match fx.broken().unwrap() {
                BrokenFixture::Symbolic(s) => assert!(!admits_multiplication(&s), "{name}"),
                BrokenFixture::Numeric(ns) => {
                    let sol = &fx.numeric_solutions[3];
                    let g = grid_residuals(&ns, sol.eval.as_ref(), &fx.sample(5, 1), 1e-6).unwrap();
                    assert!(g.worst_residual > 1e-3, "{name}");
                }
            }
        }
    }

    #[test]
    fn findex_second_equation_coefficient() {
        // with x*y^2*(y^2 - 1) in place of x*y*(y^2 - 1), mu^3 = -(x, y, x*y) stops solving it
        let v = xy();
        let mut d = findex_equations(&v).unwrap().to_rows();
        let grad = ["-1", "0", "0", "-1", "-y", "-x"].map(|t| expr(t, &v));
        let apply = |row: &[Rf]| row.iter().zip(&grad).fold(Rf::zero(&v), |a, (c, g)| &a + &(c * g));
        assert!(d.iter().all(|r| apply(r).is_zero()));
        d[1][5] = expr("x*y^2*(y^2 - 1)", &v);
        assert!(!apply(&d[1]).is_zero());
    }

    #[test]
    fn z_dependent_321_solution_when_a_vanishes() {
        let ns = generic_321(|_| 0.0, true);
        let v = |p: &[f64]| -> Result<Vec<f64>> {
            let (y, z) = (p[1], p[2]);
            let c = (y + (y * y - 4.0 * p[0]).sqrt()) / 2.0;
            let h = z.sin() + 2.0;
            Ok(vec![h * (y - c) / (y - 2.0 * c), h / (y - 2.0 * c)])
        };
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![0.1 + 0.03 * i as f64, 2.0 + 0.1 * i as f64, -1.0 + 0.2 * i as f64])
            .collect();
        assert!(grid_residuals(&ns, &v, &pts, 1e-6).unwrap().worst_residual < 1e-6);
    }
}
