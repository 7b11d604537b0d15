//! CSV tables with provenance columns `artifact, c, n, eps` leading every row.

use std::io::Write;

use anyhow::Result;
use prolate::criteria::{Artifacts, PlateauRow};
use prolate::linalg::DenseMatrix;
use prolate::studies::eigen::{EigStudyReport, EnvelopeRow, ExtremeEigRow};
use prolate::studies::tables::{HelmholtzRow, HeterogeneousReport, Table1Row, Table2Row, Table3Row};

/// 17 significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub struct Table {
    pub artifact: String,
    pub header: Vec<String>,
    pub rows: Vec<Row>,
}

pub struct Row {
    pub c: f64,
    pub n: usize,
    pub eps: Option<f64>,
    pub fields: Vec<String>,
}

impl Table {
    fn new(artifact: &str, header: &[&str]) -> Self {
        Self { artifact: artifact.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, c: f64, n: usize, eps: Option<f64>, fields: Vec<String>) {
        self.rows.push(Row { c, n, eps, fields });
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut head = vec!["artifact".to_string(), "c".into(), "n".into(), "eps".into()];
        head.extend(self.header.iter().cloned());
        w.write_record(&head)?;
        for r in &self.rows {
            let mut rec = vec![self.artifact.clone(), num(r.c), r.n.to_string(), opt(r.eps)];
            rec.extend(r.fields.iter().cloned());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn grid(c: f64, n: usize, nodes: &[f64], weights: &[f64]) -> Table {
    let mut t = Table::new("grid", &["j", "x", "w"]);
    for (j, (x, w)) in nodes.iter().zip(weights).enumerate() {
        t.push(c, n, None, vec![j.to_string(), num(*x), num(*w)]);
    }
    t
}

pub fn matrix(c: f64, n: usize, kind: &str, m: &DenseMatrix<f64>) -> Table {
    let cols: Vec<String> = (0..m.cols()).map(|j| j.to_string()).collect();
    let mut header = vec!["kind", "row"];
    header.extend(cols.iter().map(String::as_str));
    let mut t = Table::new("matrix", &header);
    for i in 0..m.rows() {
        let mut f = vec![kind.to_string(), i.to_string()];
        f.extend((0..m.cols()).map(|j| num(m[(i, j)])));
        t.push(c, n, None, f);
    }
    t
}

pub fn table1(rows: &[Table1Row]) -> Table {
    let mut t = Table::new("table1", &["target_n", "crossing_root", "nu", "lambda", "q"]);
    for r in rows {
        t.push(
            r.c,
            r.n_star,
            Some(r.eps),
            vec![r.target.to_string(), num(r.x_root), num(r.nu), num(r.lambda), num(r.q)],
        );
    }
    t
}

pub fn table2(rows: &[Table2Row]) -> Table {
    let mut t = Table::new("table2", &["scheme", "condition", "error", "steps", "converged", "direct_error"]);
    for r in rows {
        t.push(
            r.c,
            r.n,
            None,
            vec![
                r.scheme.clone(),
                num(r.condition),
                num(r.error),
                r.steps.to_string(),
                r.converged.to_string(),
                num(r.direct_error),
            ],
        );
    }
    t
}

pub fn table3(rows: &[Table3Row]) -> Table {
    let mut t = Table::new("table3", &["method", "h", "node_error"]);
    for r in rows {
        t.push(r.c, r.n, None, vec![r.method.clone(), num(r.h), num(r.error)]);
    }
    t
}

pub fn plateau(rows: &[PlateauRow]) -> Table {
    let mut t = Table::new("projection_plateau", &["elements", "h", "l2_error"]);
    for r in rows {
        t.push(r.c, r.n, None, vec![r.elements.to_string(), num(r.h), num(r.l2_error)]);
    }
    t
}

pub fn eig_study(artifact: &str, rep: &EigStudyReport) -> Table {
    let mut t = Table::new(artifact, &["operator", "j", "prolate_error", "rational_error", "legendre_error"]);
    for j in 0..rep.prolate.errors.len() {
        t.push(
            rep.c,
            rep.n,
            Some(rep.eps),
            vec![
                rep.operator.tag().to_string(),
                (j + 1).to_string(),
                num(rep.prolate.errors[j]),
                num(rep.rational.errors[j]),
                num(rep.legendre.errors[j]),
            ],
        );
    }
    t
}

pub fn envelope(rows: &[EnvelopeRow]) -> Table {
    let mut t = Table::new(
        "fig4_envelope",
        &[
            "min_re",
            "max_re",
            "max_abs_im",
            "max_dist_from_one",
            "rational_min_re",
            "rational_max_re",
            "rational_max_dist_from_one",
        ],
    );
    for r in rows {
        t.push(
            r.c,
            r.n,
            None,
            vec![
                num(r.min_re),
                num(r.max_re),
                num(r.max_abs_im),
                num(r.max_dist_from_one),
                num(r.rational_min_re),
                num(r.rational_max_re),
                num(r.rational_max_dist_from_one),
            ],
        );
    }
    t
}

pub fn extreme(rows: &[ExtremeEigRow], eps: f64) -> Table {
    let mut t = Table::new(
        "extreme_eigs",
        &["prolate_max", "prolate_min", "rational_max", "rational_min", "legendre_max", "legendre_min"],
    );
    for r in rows {
        t.push(
            r.c,
            r.n,
            Some(eps),
            vec![
                num(r.prolate_max),
                num(r.prolate_min),
                num(r.rational_max),
                num(r.rational_min),
                num(r.legendre_max),
                num(r.legendre_min),
            ],
        );
    }
    t
}

pub fn helmholtz_k60(rows: &[HelmholtzRow], eps: f64) -> Table {
    let mut t = Table::new("helmholtz_k60", &["k", "dofs", "prolate_error", "legendre_error"]);
    for r in rows {
        t.push(r.c, r.n, Some(eps), vec![num(r.k), r.dofs.to_string(), num(r.prolate_error), num(r.legendre_error)]);
    }
    t
}

pub fn samples(artifact: &str, c: f64, n: usize, eps: Option<f64>, pts: &[(f64, f64, f64)]) -> Table {
    let mut t = Table::new(artifact, &["x", "re", "im"]);
    for &(x, re, im) in pts {
        t.push(c, n, eps, vec![num(x), num(re), num(im)]);
    }
    t
}

pub fn helmholtz_k160(rep: &HeterogeneousReport) -> Table {
    samples("helmholtz_k160", rep.reference.0, rep.reference.1, None, &rep.samples)
}

/// The eight CSV files written by `run-all`, keyed by file name.
pub fn run_all_tables(a: &Artifacts, eps: f64) -> Vec<(&'static str, Table)> {
    vec![
        ("table1.csv", table1(&a.table1)),
        ("table2.csv", table2(&a.table2)),
        ("table3.csv", table3(&a.table3)),
        ("eig_laplacian.csv", eig_study("eig_laplacian", &a.eig_laplacian)),
        ("eig_bessel.csv", eig_study("eig_bessel", &a.eig_bessel)),
        ("fig4_envelope.csv", envelope(&a.envelope)),
        ("helmholtz_k60.csv", helmholtz_k60(&a.helmholtz_k60, eps)),
        ("helmholtz_k160.csv", helmholtz_k160(&a.helmholtz_k160)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn provenance_leads() {
        let t = grid(1.5, 2, &[-1.0, 0.0, 1.0], &[0.3, 1.4, 0.3]);
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("artifact,c,n,eps,j,x,w"));
        assert!(lines.next().unwrap().starts_with("grid,1.5000000000000000e0,2,,0,"));
        assert_eq!(text.lines().count(), 4);
    }
}
