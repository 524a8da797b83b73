use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use qpmid::ddesim::{decay_rate_estimate, decay_rate_estimate_with, simulate, EnvelopeModel, SimConfig};
use qpmid::hyperfunc::{
    kummer_integral_oracle, kummer_ode_residual, kummer_phi_derivative, kummer_phi_detailed, KummerParams, DEFAULT_TOL,
};
use qpmid::mid::{check_equivalences, stability_criterion, synthesize_exact, verify_dominance};
use qpmid::pade::{exp_pade_normalized, perron_pair, remainder_identity, remainder_leading_coefficient};
use qpmid::quasipoly::{find_zeros_in_rect, Rect};
use qpmid::zerogeometry::{root_curve, saff_varga_counterexample, xi_crosscheck, xi_set};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::input::{parse_complex, parse_rect, read_quasipolynomial, read_simulation, Real, SCHEMA_VERSION};
use crate::output::{complex, float_field, poly_strings, to_value, write_csv};

#[derive(Debug, Parser)]
#[command(name = "qpmid", version, about = "Maximal-multiplicity roots of delay quasipolynomials, Padé pairs of exp and Kummer zeros")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Padé pairs of the exponential as exact rationals.
    Pade {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Evaluate both sides of the remainder identity at RE,IM.
        #[arg(long, value_name = "Z", allow_hyphen_values = true, value_parser = parse_complex)]
        check_remainder: Option<Complex64>,
    },
    /// Kummer function value with its oracle residuals.
    Kummer {
        #[arg(long, allow_hyphen_values = true)]
        a: Real,
        #[arg(long, allow_hyphen_values = true)]
        b: Real,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Coefficients placing a root of multiplicity n+m+1 at s0.
    MidDesign {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        tau: Real,
        #[arg(long, allow_hyphen_values = true)]
        s0: Real,
        /// Run the equivalence checks and the dominance corroboration.
        #[arg(long)]
        verify: bool,
        /// Half-height of the dominance rectangle (default 4·2π/τ).
        #[arg(long, allow_hyphen_values = true)]
        im_cap: Option<Real>,
    },
    /// Zeros of a quasipolynomial in a rectangle.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        /// re_min,re_max,im_min,im_max
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rect)]
        rect: Rect,
        #[arg(long, default_value = "1e-10")]
        tol: Real,
    },
    /// The half-plane counterexample family k = l + 3/2, z = 1 + 2l.
    Counterexample {
        #[arg(long, allow_hyphen_values = true)]
        l: Real,
    },
    /// Real root curve k ↦ z of the Whittaker function, as CSV.
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        l: Real,
        #[arg(long, allow_hyphen_values = true)]
        kmin: Real,
        #[arg(long, allow_hyphen_values = true)]
        kmax: Real,
        #[arg(long)]
        step: Real,
        #[arg(long)]
        out: PathBuf,
    },
    /// First positive elements of the set Ξ_n.
    Xi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        /// Report |Φ(n+1, 2n+2, iζ)| for each element.
        #[arg(long)]
        crosscheck: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Method-of-steps simulation with a decay-rate estimate.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        horizon: Real,
        #[arg(long)]
        dt: Real,
        #[arg(long)]
        out: PathBuf,
        /// Fraction of the horizon skipped before fitting the envelope.
        #[arg(long, default_value = "0.5")]
        skip: Real,
        /// Record every stride-th step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(SCHEMA_VERSION));
    m
}

fn insert(m: &mut Map<String, Value>, key: &str, v: Value) {
    m.insert(key.into(), v);
}

pub fn run(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Pade { n, m, check_remainder } => pade(n, m, check_remainder),
        Command::Kummer { a, b, z } => kummer(a.value, b.value, z),
        Command::MidDesign { n, m, tau, s0, verify, im_cap } => mid_design(n, m, &tau, &s0, verify, im_cap.map(|r| r.value)),
        Command::Spectrum { input, rect, tol } => spectrum(&input, &rect, tol.value),
        Command::Counterexample { l } => Ok({
            let mut out = header("counterexample");
            insert(&mut out, "report", to_value(&saff_varga_counterexample(l.value)?)?);
            Value::Object(out)
        }),
        Command::Curve { l, kmin, kmax, step, out } => curve(l.value, kmin.value, kmax.value, step.value, &out),
        Command::Xi { n, count, crosscheck, out } => xi(n, count, crosscheck, out.as_deref()),
        Command::Simulate { input, horizon, dt, out, skip, stride } => {
            sim(&input, horizon.value, dt.value, &out, skip.value, stride)
        }
    }
}

const MAX_PADE_DEGREE: usize = 200;

fn pade(n: usize, m: usize, z: Option<Complex64>) -> Result<Value, CliError> {
    if n > MAX_PADE_DEGREE || m > MAX_PADE_DEGREE {
        return Err(CliError::Input(format!("degrees are limited to {MAX_PADE_DEGREE}")));
    }
    let raw = perron_pair(n, m);
    let norm = exp_pade_normalized(n, m);
    let mut out = header("pade");
    insert(&mut out, "n", json!(n));
    insert(&mut out, "m", json!(m));
    insert(
        &mut out,
        "perron",
        json!({
            "contract": "den(z) exp(-z) - num(z) = O(z^(n+m+1))",
            "den": poly_strings(&raw.den),
            "num": poly_strings(&raw.num),
            "contact_order": raw.contact_order(),
        }),
    );
    insert(
        &mut out,
        "normalized",
        json!({
            "contract": "den(z) exp(z) + num(z) = O(z^(n+m+1)), den monic",
            "den": poly_strings(&norm.den),
            "num": poly_strings(&norm.num),
            "contact_order": norm.contact_order(),
            "remainder_leading_coefficient": remainder_leading_coefficient(n, m).to_string(),
        }),
    );
    if let Some(z) = z {
        let c = remainder_identity(n, m, z)?;
        insert(
            &mut out,
            "remainder_check",
            json!({
                "z": complex(z),
                "lhs": complex(c.lhs),
                "rhs": complex(c.rhs),
                "discrepancy": c.discrepancy(),
                "quadrature_error": c.quadrature_error,
            }),
        );
    }
    Ok(Value::Object(out))
}

fn kummer(a: f64, b: f64, z: Complex64) -> Result<Value, CliError> {
    let p = KummerParams::new(a, b)?;
    let v = kummer_phi_detailed(&p, z, DEFAULT_TOL)?;
    let d = kummer_phi_derivative(&p, z, 1, DEFAULT_TOL)?;
    let ode = kummer_ode_residual(&p, z)?;
    let mut out = header("kummer");
    insert(&mut out, "a", json!(a));
    insert(&mut out, "b", json!(b));
    insert(&mut out, "z", json!(complex(z)));
    insert(&mut out, "value", json!(complex(v.value)));
    insert(&mut out, "derivative", json!(complex(d)));
    insert(&mut out, "series_magnitude", json!(v.magnitude));
    insert(&mut out, "terms", json!(v.terms));
    insert(&mut out, "reflected", json!(v.reflected));
    insert(&mut out, "ode_residual", json!(ode.norm()));
    let integral = if b > a && a > 0.0 {
        let i = kummer_integral_oracle(&p, z)?;
        json!({ "value": complex(i), "difference": (i - v.value).norm() })
    } else {
        Value::Null
    };
    insert(&mut out, "integral_oracle", integral);
    Ok(Value::Object(out))
}

fn mid_design(n: usize, m: usize, tau: &Real, s0: &Real, verify: bool, im_cap: Option<f64>) -> Result<Value, CliError> {
    let d = synthesize_exact(n, m, &tau.exact, &s0.exact)?;
    let q = d.quasipolynomial();
    let mut out = header("mid-design");
    insert(&mut out, "design", to_value(&d)?);
    insert(&mut out, "multiplicity", json!(d.degree_bound()));
    insert(&mut out, "top_derivative", json!(d.expected_top_derivative().to_string()));
    insert(&mut out, "s0_from_coeffs", json!(d.exact_s0_from_coeffs().to_string()));
    insert(&mut out, "stable", json!(stability_criterion(n, m, d.tau, d.a[n - 1])));
    if verify {
        let eq = check_equivalences(&q, d.s0)?;
        insert(&mut out, "all_equivalences_hold", json!(eq.all_hold()));
        insert(&mut out, "equivalences", to_value(&eq)?);
        let dom = verify_dominance(&d, im_cap.unwrap_or_else(|| q.default_im_cap()))?;
        insert(&mut out, "dominant", json!(dom.dominant));
        insert(&mut out, "dominance", to_value(&dom)?);
    }
    Ok(Value::Object(out))
}

fn spectrum(input: &Path, rect: &Rect, tol: f64) -> Result<Value, CliError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Input(format!("tol must lie in (0, 1), got {tol}")));
    }
    let q = read_quasipolynomial(input)?;
    let found = find_zeros_in_rect(&q, rect, tol)?;
    let mut out = header("spectrum");
    insert(&mut out, "quasipolynomial", to_value(&q)?);
    insert(&mut out, "total_multiplicity", json!(found.total_multiplicity()));
    insert(&mut out, "search", to_value(&found)?);
    Ok(Value::Object(out))
}

fn curve(l: f64, kmin: f64, kmax: f64, step: f64, path: &Path) -> Result<Value, CliError> {
    let c = root_curve(l, kmin, kmax, step)?;
    let header_row = ["k", "z", "residual"].map(String::from);
    let rows = c
        .samples
        .iter()
        .map(|s| vec![float_field(s.k), float_field(s.z), float_field(s.residual)]);
    let written = write_csv(path, &header_row, rows)?;
    let mut out = header("curve");
    insert(&mut out, "l", json!(l));
    insert(&mut out, "seed", to_value(&c.seed)?);
    insert(&mut out, "samples", json!(written));
    insert(
        &mut out,
        "k_range",
        json!([c.samples.first().map(|s| s.k), c.samples.last().map(|s| s.k)]),
    );
    insert(
        &mut out,
        "max_residual",
        json!(c.samples.iter().map(|s| s.residual).fold(0.0f64, f64::max)),
    );
    insert(&mut out, "truncated_low", json!(c.truncated_low));
    insert(&mut out, "truncated_high", json!(c.truncated_high));
    insert(&mut out, "out", json!(path.display().to_string()));
    Ok(Value::Object(out))
}

fn xi(n: usize, count: usize, crosscheck: bool, path: Option<&Path>) -> Result<Value, CliError> {
    let zetas = xi_set(n, count)?;
    let residuals: Option<Vec<f64>> = if crosscheck {
        Some(zetas.iter().map(|&z| xi_crosscheck(n, z)).collect::<qpmid::Result<_>>()?)
    } else {
        None
    };
    let table: Vec<Value> = zetas
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let mut row = Map::new();
            row.insert("index".into(), json!(i + 1));
            row.insert("zeta".into(), json!(z));
            if let Some(r) = &residuals {
                row.insert("residual".into(), json!(r[i]));
            }
            Value::Object(row)
        })
        .collect();
    let mut out = header("xi");
    insert(&mut out, "n", json!(n));
    insert(&mut out, "count", json!(zetas.len()));
    insert(&mut out, "xi", Value::Array(table));
    if let Some(path) = path {
        let mut header_row = vec!["index".to_string(), "zeta".to_string()];
        if crosscheck {
            header_row.push("residual".into());
        }
        let rows = zetas.iter().enumerate().map(|(i, &z)| {
            let mut r = vec![(i + 1).to_string(), float_field(z)];
            if let Some(res) = &residuals {
                r.push(float_field(res[i]));
            }
            r
        });
        write_csv(path, &header_row, rows)?;
        insert(&mut out, "out", json!(path.display().to_string()));
    }
    Ok(Value::Object(out))
}

fn sim(input: &Path, horizon: f64, dt: f64, path: &Path, skip: f64, stride: usize) -> Result<Value, CliError> {
    let (q, history) = read_simulation(input)?;
    let cfg = SimConfig {
        history,
        horizon,
        dt,
        record_stride: stride,
    };
    let tr = simulate(&q, &cfg)?;
    let plain = decay_rate_estimate(&tr, skip)?;
    let power = decay_rate_estimate_with(&tr, skip, EnvelopeModel::PowerExponential)?;
    let written = write_csv(path, &tr.header(), tr.rows().map(|r| r.into_iter().map(float_field).collect()))?;
    let mut out = header("simulate");
    insert(&mut out, "quasipolynomial", to_value(&q)?);
    insert(&mut out, "config", to_value(&cfg)?);
    insert(&mut out, "points", json!(written));
    insert(&mut out, "decay", to_value(&plain)?);
    insert(&mut out, "decay_power_exponential", to_value(&power)?);
    insert(&mut out, "out", json!(path.display().to_string()));
    Ok(Value::Object(out))
}
