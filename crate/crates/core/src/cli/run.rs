use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::job::{Command, JobSpec, MapDesc, ModeDesc, TailDesc, DEFAULT_DEPTH, DEFAULT_KMAX, MAX_ORDER};
use super::report::{ext, opt_radius, radius, valuation, verdicts};
use crate::error::Error;
use crate::exact::{floor_rat, ExtRational};
use crate::linearize::{identity_residuals, radii, schroder_solve, AffineTail, ConjugacyReport, MapSpec, Tail};
use crate::oracle::{
    direct_bk_recursion, domain_exponent, pointwise_conjugacy_check, preimage_census, verify_partition_lemma, Mode,
};
use crate::series::TruncatedSeries;
use crate::ufield::{FieldDesc, FpDomain, PAdicDomain, QDomain, UltraScalar};
use crate::{LaurentFp, LaurentQ, PAdic};

pub const SCHEMA: &str = "ultradisc/1";

/// Digits of agreement required of identity residuals that are not exact zeros.
pub const MIN_DIGITS: i64 = 8;

/// An error with the job path it came from, when known.
#[derive(Clone, Debug, PartialEq)]
pub struct JobError {
    pub path: Option<String>,
    pub error: Error,
}

impl From<Error> for JobError {
    fn from(error: Error) -> Self {
        JobError { path: None, error }
    }
}

impl JobError {
    fn at(path: impl Into<String>) -> impl FnOnce(Error) -> JobError {
        let path = path.into();
        move |error| JobError {
            path: Some(path),
            error,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({"code": self.error.code(), "message": self.error.to_string()});
        if let Some(p) = &self.path {
            e["path"] = json!(p);
        }
        json!({"schema": SCHEMA, "error": e})
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub passed: bool,
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("report values are plain JSON");
        s.push('\n');
        s
    }
}

type Outcome = Result<(Value, bool), JobError>;

pub fn run_job(spec: &JobSpec) -> Result<Report, JobError> {
    spec.field.validate().map_err(JobError::at("field"))?;
    let order = spec.order();
    if order < 2 {
        return Err(JobError::at("params.N")(Error::Invariant(
            "order must be at least 2".into(),
        )));
    }
    if order > MAX_ORDER {
        return Err(JobError::at("params.N")(Error::TooLarge(format!(
            "order {order} exceeds {MAX_ORDER}"
        ))));
    }
    let mut echo = spec.clone();
    let (results, passed) = match &spec.field {
        FieldDesc::Padic { p, precision } => {
            let f = PAdicDomain::new(*p, *precision)?;
            dispatch::<PAdic>(&f, spec, &mut echo, Some(*p))?
        }
        FieldDesc::LaurentFp { p, precision } => {
            let f = FpDomain::new(*p, *precision)?;
            if spec.command == Command::Census {
                census(&f, spec, &mut echo)?
            } else {
                dispatch::<LaurentFp>(&f, spec, &mut echo, Some(*p))?
            }
        }
        FieldDesc::LaurentQ { precision } => {
            let f = QDomain::new(*precision)?;
            dispatch::<LaurentQ>(&f, spec, &mut echo, None)?
        }
    };
    let value = json!({
        "schema": SCHEMA,
        "job": serde_json::to_value(&echo).expect("job spec serializes"),
        "results": {spec.command.name(): results},
        "passed": passed,
    });
    Ok(Report { value, passed })
}

fn parse<S: UltraScalar>(field: &S::Field, lit: &str, path: String) -> Result<S, JobError> {
    S::parse(field, lit).map_err(JobError::at(path))
}

/// Builds the map and rewrites its literals in canonical form.
fn build_map<S: UltraScalar>(field: &S::Field, desc: &MapDesc) -> Result<(MapSpec<S>, MapDesc), JobError> {
    let lambda: S = parse(field, &desc.lambda, "map.lambda".into())?;
    let coeffs = desc
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| parse(field, c, format!("map.coefficients[{i}]")))
        .collect::<Result<Vec<S>, _>>()?;
    let (tail, tail_desc) = match &desc.tail {
        TailDesc::Polynomial => (Tail::Polynomial, TailDesc::Polynomial),
        TailDesc::Unknown => (Tail::Unknown, TailDesc::Unknown),
        TailDesc::Affine {
            alpha,
            beta,
            from,
            unit,
        } => {
            let u: S = match unit {
                Some(u) => parse(field, u, "map.tail.affine.unit".into())?,
                None => S::one(field),
            };
            let t = AffineTail {
                alpha: *alpha,
                beta: *beta,
                from: *from,
                unit: u.clone(),
            };
            let d = TailDesc::Affine {
                alpha: *alpha,
                beta: *beta,
                from: *from,
                unit: unit.as_ref().map(|_| u.to_string()),
            };
            (Tail::Affine(t), d)
        }
    };
    let canonical = MapDesc {
        lambda: lambda.to_string(),
        coefficients: coeffs.iter().map(|c| c.to_string()).collect(),
        tail: tail_desc,
    };
    let m = MapSpec::new(field, lambda, coeffs, tail).map_err(JobError::at("map"))?;
    Ok((m, canonical))
}

fn require_map(spec: &JobSpec) -> Result<&MapDesc, JobError> {
    spec.map.as_ref().ok_or_else(|| {
        JobError::at("map")(Error::Schema {
            path: "map".into(),
            msg: format!("the {} command needs a map", spec.command.name()),
        })
    })
}

fn dispatch<S: UltraScalar>(
    field: &S::Field,
    spec: &JobSpec,
    echo: &mut JobSpec,
    residue_char: Option<u64>,
) -> Outcome {
    if spec.command == Command::Census {
        return Err(Error::InvalidField("census runs over laurent_fp fields only".into()).into());
    }
    let (m, canonical) = build_map::<S>(field, require_map(spec)?)?;
    echo.map = Some(canonical);
    match spec.command {
        Command::Radii => Ok(radii_cmd(&m)),
        Command::Solve => solve_cmd(&m, spec.order()),
        Command::Verify => verify_cmd(&m, spec, echo, residue_char),
        Command::Oracle => oracle_cmd(&m, spec),
        Command::Census => unreachable!("handled above"),
    }
}

fn radii_cmd<S: UltraScalar>(m: &MapSpec<S>) -> (Value, bool) {
    let r = radii(m);
    let v = json!({
        "regime": m.regime().name(),
        "v_lambda": m.vlam(),
        "rho": radius(&r.rho),
        "gamma": radius(&r.gamma),
        "rf": opt_radius(r.rf.as_ref()),
        "delta": opt_radius(r.delta.as_ref()),
        "sandwich": r.sandwich,
    });
    (v, r.sandwich == Some(true))
}

fn solve_cmd<S: UltraScalar>(m: &MapSpec<S>, order: usize) -> Outcome {
    let rep = schroder_solve(m, order)?;
    let ids = identity_residuals(&rep)?;
    let (semi, full) = (ids.semi_holds(MIN_DIGITS), ids.full_holds(MIN_DIGITS));
    let (radii_v, _) = radii_cmd(m);
    let v = json!({
        "order": rep.order,
        "regime": rep.regime.name(),
        "b": rep.b().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "valuations": rep.b().iter().map(|b| valuation(&b.valuation())).collect::<Vec<_>>(),
        "radii": radii_v,
        "rg_lower": opt_radius(rep.rg_lower.as_ref()),
        "delta_g_lower": opt_radius(rep.delta_g_lower.as_ref()),
        "delta_g_empirical": radius(&rep.delta_g_empirical),
        "bound_check": verdicts(&rep.bound_check),
        "identities": {
            "semi_holds": semi,
            "full_holds": full,
            "min_digits": ids.min_digits(),
        },
    });
    Ok((v, rep.all_bounds_pass() && semi && full))
}

/// `π^v (u + π w)` with `u` a small integer unit and `v` inside the disc.
fn random_points<S: UltraScalar>(
    field: &S::Field,
    e: &ExtRational,
    residue_char: Option<u64>,
    n: usize,
    seed: u64,
) -> Vec<S> {
    let base = match e {
        ExtRational::Finite(e) => {
            let b = floor_rat(&-e) + 1;
            i64::try_from(b).unwrap_or(i64::MAX / 2)
        }
        ExtRational::PosInf => 0,
        ExtRational::NegInf => return Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let v = base + rng.gen_range(0..4);
            let u = loop {
                let u: i64 = rng.gen_range(1..1000);
                if residue_char.is_none_or(|p| u % p as i64 != 0) {
                    break u;
                }
            };
            let w: i64 = rng.gen_range(0..1000);
            let unit = S::from_integer(field, &BigInt::from(u))
                .try_add(
                    &S::uniformizer_pow(field, 1)
                        .try_mul(&S::from_integer(field, &BigInt::from(w)))
                        .unwrap(),
                )
                .unwrap();
            S::uniformizer_pow(field, v).try_mul(&unit).unwrap()
        })
        .collect()
}

fn verify_cmd<S: UltraScalar>(
    m: &MapSpec<S>,
    spec: &JobSpec,
    echo: &mut JobSpec,
    residue_char: Option<u64>,
) -> Outcome {
    let rep = schroder_solve(m, spec.order())?;
    let mut points = Vec::new();
    for (i, lit) in spec.params.points.iter().flatten().enumerate() {
        points.push(parse::<S>(m.field(), lit, format!("params.points[{i}]"))?);
    }
    echo.params.points = spec
        .params
        .points
        .as_ref()
        .map(|_| points.iter().map(|x| x.to_string()).collect());
    let modes: &[Mode] = match spec.params.mode.unwrap_or_default() {
        ModeDesc::Semi => &[Mode::Semi],
        ModeDesc::Full => &[Mode::Full],
        ModeDesc::Both => &[Mode::Semi, Mode::Full],
    };
    let mut passed = true;
    let mut out = serde_json::Map::new();
    for &mode in modes {
        let e = domain_exponent(&rep, mode).ok_or(Error::NoTailModel)?;
        let mut pts = points.clone();
        if let Some(n) = spec.params.random_points {
            pts.extend(random_points(
                m.field(),
                &e,
                residue_char,
                n,
                spec.params.seed.unwrap_or(0),
            ));
        }
        let checks = pointwise_conjugacy_check(&rep, &pts, mode)?;
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                passed &= c.holds() != Some(false);
                json!({
                    "point": c.point.to_string(),
                    "valuation": valuation(&c.point.valuation()),
                    "in_domain": c.in_domain,
                    "residual": c.residual.as_ref().map(valuation),
                    "floor": c.floor.as_ref().map(ext),
                    "holds": c.holds(),
                })
            })
            .collect();
        out.insert(mode.name().into(), json!({"domain_exponent": ext(&e), "points": rows}));
    }
    Ok((json!({"order": rep.order, "modes": out}), passed))
}

fn oracle_cmd<S: UltraScalar>(m: &MapSpec<S>, spec: &JobSpec) -> Outcome {
    let mut kmax = spec.params.kmax.unwrap_or(DEFAULT_KMAX);
    if matches!(m.tail(), Tail::Unknown) {
        kmax = kmax.min(m.explicit_degree());
    }
    let direct = direct_bk_recursion(m, kmax).map_err(JobError::at("params.kmax"))?;
    let rep: ConjugacyReport<S> = schroder_solve(m, kmax.max(2))?;
    let mut matches = true;
    let rows: Vec<Value> = direct
        .iter()
        .zip(rep.b())
        .enumerate()
        .map(|(i, (d, s))| {
            let diff = d.try_sub(s).expect("same field");
            matches &= diff.is_zero_like();
            json!({
                "k": i + 1,
                "oracle": d.to_string(),
                "solver": s.to_string(),
                "exact_match": diff.is_exact_zero(),
            })
        })
        .collect();
    let mut lemma_ok = true;
    let lemma: Vec<Value> = (2..=24)
        .map(|k| {
            let r = verify_partition_lemma(k).expect("k within the enumeration guard");
            lemma_ok &= r.bound_holds && (!matches!(k, 4 | 8 | 16) || r.power_witness);
            json!({
                "k": k,
                "max_l_with_alpha1_zero": r.max_l_with_alpha1_zero,
                "bound_holds": r.bound_holds,
                "power_witness": r.power_witness,
            })
        })
        .collect();
    let v = json!({
        "kmax": kmax,
        "coefficients": rows,
        "solver_matches_oracle": matches,
        "partition_lemma": lemma,
    });
    Ok((v, matches && lemma_ok))
}

fn census(field: &FpDomain, spec: &JobSpec, echo: &mut JobSpec) -> Outcome {
    let h = match &spec.params.series {
        Some(lits) => {
            let mut cs = Vec::with_capacity(lits.len());
            for (i, lit) in lits.iter().enumerate() {
                cs.push(parse::<LaurentFp>(field, lit, format!("params.series[{i}]"))?);
            }
            echo.params.series = Some(cs.iter().map(|c| c.to_string()).collect());
            TruncatedSeries::polynomial(field, cs).map_err(JobError::at("params.series"))?
        }
        None => {
            let (m, canonical) = build_map::<LaurentFp>(field, require_map(spec)?)?;
            echo.map = Some(canonical);
            m.realize(m.explicit_degree()).map_err(JobError::at("map"))?
        }
    };
    let depth = spec.params.depth.unwrap_or(DEFAULT_DEPTH);
    let r = preimage_census(&h, depth).map_err(JobError::at("params.depth"))?;
    let hist: Vec<Value> = r
        .histogram
        .iter()
        .map(|e| {
            json!({
                "image": e.image,
                "preimages": e.preimages,
                "preimages_open": e.preimages_open,
                "ramified": e.ramified,
            })
        })
        .collect();
    let passed = r.counts_sum() == r.domain_size && r.open_disc_injective() && r.within_d() != Some(false);
    let v = json!({
        "prime": r.prime,
        "modulus_depth": r.modulus_depth,
        "domain_size": r.domain_size,
        "open_domain_size": r.open_domain_size,
        "lemma1_d": r.lemma1_d,
        "max_preimages": r.max_preimages(),
        "open_disc_injective": r.open_disc_injective(),
        "within_d": r.within_d(),
        "histogram": hist,
    });
    Ok((v, passed))
}
