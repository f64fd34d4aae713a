use std::fmt::Write as _;
use std::io::{self, Write};

use super::MetricsError;
use crate::scalar::Scalar;

/// `rate_i = ln(e_{i−1}/e_i) / ln(h_{i−1}/h_i)` for `i ≥ 1`.
pub fn rates<T: Scalar>(errors: &[T], hs: &[T]) -> Result<Vec<T>, MetricsError> {
    if errors.len() != hs.len() || errors.len() < 2 {
        return Err(MetricsError::LengthMismatch {
            errors: errors.len(),
            sizes: hs.len(),
        });
    }
    if let Some((index, &e)) = errors.iter().enumerate().find(|(_, &e)| !(e > T::zero())) {
        return Err(MetricsError::NonPositiveError {
            index,
            value: e.to_f64_lossy(),
        });
    }
    if let Some(i) = (1..hs.len()).find(|&i| !(hs[i] < hs[i - 1]) || !(hs[i] > T::zero())) {
        return Err(MetricsError::NonDecreasingH { index: i });
    }
    Ok((1..errors.len())
        .map(|i| (errors[i - 1] / errors[i]).ln() / (hs[i - 1] / hs[i]).ln())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub h: T,
    pub dt: T,
    pub err_c: T,
    pub rate_c: Option<T>,
    pub err_grad: T,
    pub rate_grad: Option<T>,
}

/// Relative errors and rates over a sequence of meshes.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport<T> {
    pub model: String,
    pub family: String,
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Scalar> ConvergenceReport<T> {
    /// Rows from `(h, dt, err_c, err_grad)`, ordered as given.
    pub fn new(
        model: impl Into<String>,
        family: impl Into<String>,
        entries: &[(T, T, T, T)],
    ) -> Result<Self, MetricsError> {
        let hs: Vec<T> = entries.iter().map(|e| e.0).collect();
        let ec: Vec<T> = entries.iter().map(|e| e.2).collect();
        let eg: Vec<T> = entries.iter().map(|e| e.3).collect();
        let (rc, rg) = if entries.len() >= 2 {
            (rates(&ec, &hs)?, rates(&eg, &hs)?)
        } else {
            (Vec::new(), Vec::new())
        };
        let rows = entries
            .iter()
            .enumerate()
            .map(|(i, &(h, dt, err_c, err_grad))| ConvergenceRow {
                h,
                dt,
                err_c,
                rate_c: i.checked_sub(1).map(|j| rc[j]),
                err_grad,
                rate_grad: i.checked_sub(1).map(|j| rg[j]),
            })
            .collect();
        Ok(Self {
            model: model.into(),
            family: family.into(),
            rows,
        })
    }

    pub fn dt_schedule(&self) -> Vec<T> {
        self.rows.iter().map(|r| r.dt).collect()
    }

    pub fn final_rates(&self) -> Option<(T, T)> {
        let last = self.rows.last()?;
        Some((last.rate_c?, last.rate_grad?))
    }

    /// `h,err_c,rate_c,err_grad,rate_grad`; first-row rates left blank.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "h,err_c,rate_c,err_grad,rate_grad")?;
        let opt = |r: Option<T>| r.map(|v| format!("{v:.7}")).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                out,
                "{:.7},{:.7e},{},{:.7e},{}",
                r.h,
                r.err_c,
                opt(r.rate_c),
                r.err_grad,
                opt(r.rate_grad)
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} on {} meshes\n", self.model, self.family);
        s.push_str("| h | err_c | rate_c | err_grad | rate_grad |\n");
        s.push_str("|---|---|---|---|---|\n");
        let opt = |r: Option<T>| r.map(|v| format!("{v:.7}")).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                s,
                "| {:.7} | {:.7e} | {} | {:.7e} | {} |",
                r.h,
                r.err_c,
                opt(r.rate_c),
                r.err_grad,
                opt(r.rate_grad)
            );
        }
        s
    }
}
