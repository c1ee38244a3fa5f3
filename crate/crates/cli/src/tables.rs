//! Closed-form values of the small exactly solvable cases next to the
//! numbers the library computes for them.

use std::collections::BTreeMap;

use nlrpb::cryptoherm::hermitize;
use nlrpb::linalg::jacobi_eigh;
use nlrpb::models::{chebyshev_model, chebyshev_paper_normalization, two_param_model};
use nlrpb::pseudoboson::build_metrics;
use nlrpb::Matrix;

use crate::document::{Content, ReportDocument, Section, TableRow};
use crate::CliError;

const EXACT_TOL: f64 = 1e-12;
/// The N = 5 levels are quoted to nine decimals.
const QUOTED_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Table {
    N2,
    N3,
    N4,
    N5,
    TwoParam,
}

fn matrix_rows(name: &str, paper: &[&[f64]], computed: &Matrix, tol: f64) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for (i, line) in paper.iter().enumerate() {
        for (j, &p) in line.iter().enumerate() {
            rows.push(TableRow::new(
                format!("{name}[{i},{j}]"),
                p,
                computed[(i, j)],
                tol,
            ));
        }
    }
    rows
}

fn vector_rows(name: &str, paper: &[f64], computed: &[f64], tol: f64) -> Vec<TableRow> {
    paper
        .iter()
        .zip(computed)
        .enumerate()
        .map(|(k, (&p, &c))| TableRow::new(format!("{name}[{k}]"), p, c, tol))
        .collect()
}

fn n2() -> nlrpb::Result<Vec<TableRow>> {
    let r2 = 2f64.sqrt();
    let r17 = 17f64.sqrt();
    let model = chebyshev_model(2)?;
    let listed = chebyshev_paper_normalization(2)?;
    let s_eta = build_metrics(&listed).s_eta;
    let ev = jacobi_eigh(&s_eta)?.eigenvalues;
    let mut rows = matrix_rows("M", &[&[r2, 2.0], &[1.0, r2]], &model.m, EXACT_TOL);
    rows.extend(vector_rows(
        "eps",
        &[0.0, 2.0 * r2],
        listed.eps(),
        EXACT_TOL,
    ));
    rows.extend(matrix_rows(
        "S_eta",
        &[&[0.75, -r2 / 4.0], &[-r2 / 4.0, 1.5]],
        &s_eta,
        EXACT_TOL,
    ));
    rows.extend(vector_rows(
        "metric_eigenvalue",
        &[(9.0 - r17) / 8.0, (9.0 + r17) / 8.0],
        &ev,
        EXACT_TOL,
    ));
    Ok(rows)
}

fn n3() -> nlrpb::Result<Vec<TableRow>> {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let model = chebyshev_model(3)?;
    let listed = chebyshev_paper_normalization(3)?;
    let s_eta = build_metrics(&listed).s_eta;
    let h = hermitize(&model.m, &s_eta)?.h;
    let mut rows = vector_rows("eps", &[0.0, r3, 2.0 * r3], listed.eps(), EXACT_TOL);
    rows.extend(matrix_rows(
        "S_eta",
        &[&[3.0, 0.0, 0.0], &[0.0, 6.0, 0.0], &[0.0, 0.0, 6.0]],
        &s_eta,
        EXACT_TOL,
    ));
    rows.extend(matrix_rows(
        "h",
        &[&[r3, r2, 0.0], &[r2, r3, 1.0], &[0.0, 1.0, r3]],
        &h,
        EXACT_TOL,
    ));
    Ok(rows)
}

fn n4() -> nlrpb::Result<Vec<TableRow>> {
    let r2 = 2f64.sqrt();
    let scale = (2.0 + r2).sqrt();
    let alpha = [0.0, 2.0 - r2, r2, 2.0];
    let model = chebyshev_model(4)?;
    let eps = model.system.eps();
    let computed_alpha: Vec<f64> = eps.iter().map(|e| e / scale).collect();
    let mut rows = vector_rows("alpha", &alpha, &computed_alpha, EXACT_TOL);
    let paper_eps: Vec<f64> = alpha.iter().map(|a| a * scale).collect();
    rows.extend(vector_rows("eps", &paper_eps, eps, EXACT_TOL));
    Ok(rows)
}

fn n5() -> nlrpb::Result<Vec<TableRow>> {
    let quoted = [0.0, 0.726542529, 1.902113032, 3.077683536, 3.804226065];
    let model = chebyshev_model(5)?;
    Ok(vector_rows("eps", &quoted, model.system.eps(), QUOTED_TOL))
}

fn two_param() -> nlrpb::Result<Vec<TableRow>> {
    let pairs = [
        (2.0, -1.0),
        (1.0, -1.0),
        (0.5, -2.0),
        (3.0, -0.5),
        (-2.0, 4.0),
    ];
    let mut rows = Vec::new();
    for (beta, delta) in pairs {
        let model = two_param_model(beta, delta)?;
        let label = format!("({beta},{delta})");
        let eps1 = -(beta - delta) * (beta - delta) / (beta * delta);
        rows.push(TableRow::new(
            format!("eps[1] {label}"),
            eps1,
            model.system.eps()[1],
            EXACT_TOL,
        ));
        rows.push(TableRow::new(
            format!("biorthonormality {label}"),
            0.0,
            model.system.biorthonormality_residual(),
            EXACT_TOL,
        ));
        let theta = build_metrics(&model.system).s_eta;
        let defect = (&(&theta * &model.m) - &(&model.m.transpose() * &theta)).frobenius_norm();
        rows.push(TableRow::new(
            format!("chwrt {label}"),
            0.0,
            defect,
            EXACT_TOL,
        ));
    }
    Ok(rows)
}

pub fn paper_tables(which: Table) -> Result<ReportDocument, CliError> {
    let (title, tol, rows) = match which {
        Table::N2 => ("N = 2 Chebyshev model", EXACT_TOL, n2()),
        Table::N3 => ("N = 3 Chebyshev model", EXACT_TOL, n3()),
        Table::N4 => ("N = 4 Chebyshev model", EXACT_TOL, n4()),
        Table::N5 => ("N = 5 Chebyshev model", QUOTED_TOL, n5()),
        Table::TwoParam => ("two-parameter model", EXACT_TOL, two_param()),
    };
    let rows = rows.map_err(|e| CliError::Math(e.into()))?;
    let tolerances = BTreeMap::from([("table".to_string(), tol)]);
    Ok(ReportDocument::new(
        "paper-tables",
        tolerances,
        vec![Section::new(title, Content::Table(rows))],
    ))
}
