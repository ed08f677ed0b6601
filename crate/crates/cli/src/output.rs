//! CSV and JSON rendering of analysis results.

use std::io::Write;

use cc_sched::analysis::SigmaBin;
use cc_sched::{DofReport, Rational, SweepRow};
use serde::Serialize;

/// `num/den` rounded half-up to six decimal places, exact for non-negative
/// values.
pub fn decimal6(x: Rational) -> String {
    let (num, den) = (*x.numer(), *x.denom());
    let neg = (num < 0) != (den < 0);
    let (num, den) = (num.abs(), den.abs());
    let scaled = (num * 1_000_000 * 2 + den) / (2 * den);
    let sign = if neg && scaled != 0 { "-" } else { "" };
    format!("{sign}{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

pub fn fraction(x: Rational) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub const SWEEP_HEADER: [&str; 12] =
    ["eta_hat", "Q", "strategy", "beta", "K_M", "K_U", "T_M", "T_U", "dof_num", "dof_den", "dof_decimal", "feasible"];

pub const SIGMA_HEADER: [&str; 5] = ["sigma_bin", "n_samples", "dof_m_decimal", "unicast_baseline", "uniform_optimum"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.eta_hat.to_string(),
            r.q.to_string(),
            r.strategy.to_string(),
            r.beta.to_string(),
            r.k_m.to_string(),
            r.k_u.to_string(),
            opt(r.t_m),
            opt(r.t_u),
            opt(r.dof.map(|d| *d.numer())),
            opt(r.dof.map(|d| *d.denom())),
            opt(r.dof.map(decimal6)),
            r.feasible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sigma_csv<W: Write>(bins: &[SigmaBin], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SIGMA_HEADER)?;
    for b in bins {
        w.write_record([
            format!("{:.1}", b.sigma_bin),
            b.n_samples.to_string(),
            format!("{:.6}", b.dof_m),
            b.unicast_baseline.to_string(),
            opt(b.uniform_optimum.map(decimal6)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofJson {
    pub dof: String,
    pub dof_decimal: f64,
    pub closed_form: String,
    pub matches_closed_form: bool,
    pub j_m: usize,
    pub j_u: usize,
    pub t_m: usize,
    pub t_u: usize,
    pub k_m: usize,
    pub k_u: usize,
    pub strategy: String,
    pub eta_hat: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub beta: usize,
}

impl From<&DofReport> for DofJson {
    fn from(r: &DofReport) -> Self {
        DofJson {
            dof: fraction(r.empirical),
            dof_decimal: decimal6(r.empirical).parse().expect("decimal string"),
            closed_form: fraction(r.closed_form),
            matches_closed_form: r.empirical == r.closed_form,
            j_m: r.j_m,
            j_u: r.j_u,
            t_m: r.t_m,
            t_u: r.t_u,
            k_m: r.k_m,
            k_u: r.k_u,
            strategy: r.strategy.to_string(),
            eta_hat: r.eta_hat,
            q: r.q,
            beta: r.beta,
        }
    }
}
