//! One function per command, each producing a [`Report`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::Rational;
use serde_json::json;

use cardinal_core::scalars::{self, BigReal};
use cardinal_core::spectra::{
    self, circulant_condition, circulant_eigenvalues, extreme_eigenvalues_bisection, gershgorin_bounds,
    tridiagonal_report, CosineTable, DenseSymmetric, SpectrumReport,
};
use cardinal_core::theory::{self, ConjectureVerdict};
use cardinal_core::toeplitz::{
    build_toeplitz, dms_order, ferreira_embed, newsam_dietrich_order, periodization_plan, periodize,
    prime_embedding_order, BandedToeplitz, Circulant, EmbeddingKind, EmbeddingPlan, Guarantee,
};

use crate::config::{Command, RunConfig};
use crate::error::Result;
use crate::report::{Cell, Report};

/// Significant digits shown for table entries.
pub const TABLE_DIGITS: u32 = 7;
/// Significant digits shown for figure series.
pub const FIGURE_DIGITS: u32 = 10;
/// Significant digits shown for individual eigenvalues.
pub const EIGENVALUE_DIGITS: u32 = 20;
/// Largest matrix order for which `--oracle` runs the dense cross-check.
pub const ORACLE_MAX_ORDER: usize = 64;

pub fn run(config: &RunConfig) -> Result<Report> {
    match config.command {
        Command::Table31 => table31(config),
        Command::Table51 => table51(config),
        Command::Figure51 => figure51(config),
        Command::Figure52 => figure52(config),
        Command::Scan => scan(config),
        Command::LambdaInf => lambda_inf(config),
        Command::EmbedPlan => embed_plan(config),
    }
}

fn grid(config: &RunConfig) -> Vec<(u32, usize)> {
    config.degrees.iter().flat_map(|&d| config.sizes.iter().map(move |&n| (d, n))).collect()
}

/// `κ₂(T_n^d)`: closed form for tridiagonal matrices, bisection otherwise.
pub fn toeplitz_condition(t: &BandedToeplitz, precision: u32) -> Result<SpectrumReport> {
    Ok(if t.half_bandwidth() == 1 {
        tridiagonal_report(t, precision)?
    } else {
        extreme_eigenvalues_bisection(t, precision)?
    })
}

/// Relative tolerance for comparisons against the dense oracle.
pub fn oracle_tolerance(precision: u32) -> BigReal {
    scalars::pow2(-((precision / 2) as i32 - 28), precision)
}

fn extremes_match(eig: &[BigReal], report: &SpectrumReport, tol: &BigReal) -> bool {
    let (lo, hi) = (&eig[0], eig.last().expect("nonempty"));
    scalars::relative_error(lo, &report.lambda_min) <= *tol && scalars::relative_error(hi, &report.lambda_max) <= *tol
}

/// Dense-oracle agreement of the extreme eigenvalues of `T` and, if given,
/// of `C`; `None` when either matrix exceeds [`ORACLE_MAX_ORDER`].
pub fn oracle_check(
    t: &BandedToeplitz,
    t_report: &SpectrumReport,
    c: Option<(&Circulant, &SpectrumReport)>,
    precision: u32,
) -> Result<Option<bool>> {
    if t.order() > ORACLE_MAX_ORDER || c.is_some_and(|(c, _)| c.order() > ORACLE_MAX_ORDER + t.half_bandwidth()) {
        return Ok(None);
    }
    let tol = oracle_tolerance(precision);
    let mut ok = extremes_match(&DenseSymmetric::from_toeplitz(t, precision)?.eigenvalues()?, t_report, &tol);
    if let Some((c, c_report)) = c {
        ok &= extremes_match(&DenseSymmetric::from_circulant(c, precision)?.eigenvalues()?, c_report, &tol);
    }
    Ok(Some(ok))
}

fn oracle_cell(result: Option<bool>) -> Cell {
    match result {
        None => Cell::Empty,
        Some(true) => Cell::text("pass"),
        Some(false) => Cell::text("fail"),
    }
}

fn exact_number(q: &Rational, digits: u32) -> Cell {
    Cell::Number { text: scalars::format_significant_rational(q, digits), certified: true }
}

struct ToeplitzCell {
    t: SpectrumReport,
    c: Option<(usize, SpectrumReport)>,
    oracle: Option<bool>,
}

fn toeplitz_cell(d: u32, n: usize, with_circulant: bool, config: &RunConfig) -> Result<ToeplitzCell> {
    let t = build_toeplitz(d, n)?;
    let t_report = toeplitz_condition(&t, config.precision)?;
    let (c, c_report) = if with_circulant {
        let c = periodize(&t);
        let report = circulant_condition(&c, config.precision)?;
        (Some(c), Some(report))
    } else {
        (None, None)
    };
    let oracle = if config.oracle {
        let pair = c.as_ref().zip(c_report.as_ref());
        oracle_check(&t, &t_report, pair, config.precision)?
    } else {
        None
    };
    Ok(ToeplitzCell { t: t_report, c: c.map(|c| c.order()).zip(c_report), oracle })
}

fn compute_cells(config: &RunConfig, with_circulant: bool) -> Result<BTreeMap<(u32, usize), ToeplitzCell>> {
    grid(config)
        .into_par_iter()
        .map(|(d, n)| Ok(((d, n), toeplitz_cell(d, n, with_circulant, config)?)))
        .collect()
}

fn finish_cross_checks(report: &mut Report) {
    let oracle = report.column("oracle");
    if let Some(i) = oracle {
        report.cross_check_failures = report.rows.iter().filter(|r| r[i] == Cell::text("fail")).count();
    }
    report.summary.push(("rows", json!(report.rows.len())));
    report.summary.push(("uncertified_cells", json!(report.uncertified_cells())));
    if oracle.is_some() {
        report.summary.push(("oracle_failures", json!(report.cross_check_failures)));
    }
}

/// `κ₂(T_n^d)` per `(d, n)`, followed by the Gershgorin bound `GB(d)`.
pub fn table31(config: &RunConfig) -> Result<Report> {
    let cells = compute_cells(config, false)?;
    let mut report =
        Report::new(vec!["kind", "d", "n", "value", "certified_digits", "method", "exact", "oracle"]);
    for &d in &config.degrees {
        for &n in &config.sizes {
            let cell = &cells[&(d, n)];
            report.push(vec![
                Cell::text("kappa_T"),
                Cell::int(d),
                Cell::int(n),
                Cell::number(&cell.t.condition, TABLE_DIGITS, cell.t.certified_digits),
                Cell::int(cell.t.certified_digits),
                Cell::text(cell.t.method.as_str()),
                Cell::Empty,
                oracle_cell(cell.oracle),
            ]);
        }
        let g = gershgorin_bounds(&*cardinal_core::splines::symbol(d)?);
        let (value, exact, method) = match g.condition_bound() {
            Some(gb) => (exact_number(&gb, TABLE_DIGITS), Cell::exact(&gb), "gershgorin"),
            None => (Cell::Empty, Cell::Empty, "not_diagonally_dominant"),
        };
        report.push(vec![
            Cell::text("gershgorin_bound"),
            Cell::int(d),
            Cell::Empty,
            value,
            Cell::Empty,
            Cell::text(method),
            exact,
            Cell::Empty,
        ]);
    }
    finish_cross_checks(&mut report);
    Ok(report)
}

/// `κ₂(T_n^d)` and `κ₂(C_m^d)` per `(d, n)`, followed by `1/λ_∞^d`.
pub fn table51(config: &RunConfig) -> Result<Report> {
    let cells = compute_cells(config, true)?;
    let mut report =
        Report::new(vec!["kind", "d", "n", "m", "value", "certified_digits", "method", "exact", "oracle"]);
    for &d in &config.degrees {
        for &n in &config.sizes {
            let cell = &cells[&(d, n)];
            let (m, c) = cell.c.as_ref().expect("circulant computed");
            for (kind, m, s) in [("kappa_T", Cell::Empty, &cell.t), ("kappa_C", Cell::int(*m), c)] {
                report.push(vec![
                    Cell::text(kind),
                    Cell::int(d),
                    Cell::int(n),
                    m,
                    Cell::number(&s.condition, TABLE_DIGITS, s.certified_digits),
                    Cell::int(s.certified_digits),
                    Cell::text(s.method.as_str()),
                    Cell::Empty,
                    oracle_cell(cell.oracle),
                ]);
            }
        }
        let inv = Rational::from(theory::lambda_infinity_sum(d)?.recip_ref());
        report.push(vec![
            Cell::text("inv_lambda_inf"),
            Cell::int(d),
            Cell::Empty,
            Cell::Empty,
            exact_number(&inv, TABLE_DIGITS),
            Cell::Empty,
            Cell::text("exact"),
            Cell::exact(&inv),
            Cell::Empty,
        ]);
    }
    finish_cross_checks(&mut report);
    Ok(report)
}

fn index_list(set: &std::collections::BTreeSet<usize>) -> String {
    set.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// Every eigenvalue `λ_k(C_m^d)` with the minimal ones flagged.
pub fn figure51(config: &RunConfig) -> Result<Report> {
    let p = config.precision;
    let results: Vec<(ConjectureVerdict, Vec<BigReal>, Vec<BigReal>)> = grid(config)
        .into_par_iter()
        .map(|(d, n)| {
            let c = periodize(&build_toeplitz(d, n)?);
            let eig = circulant_eigenvalues(&c, p)?;
            let eig2 = circulant_eigenvalues(&c, 2 * p)?;
            Ok((theory::conjecture_audit(d, n, p)?, eig, eig2))
        })
        .collect::<Result<_>>()?;
    let mut report =
        Report::new(vec!["d", "n", "m", "k", "lambda", "certified_digits", "is_min", "predicted_min"]);
    let mut agreeing = 0;
    for (v, eig, eig2) in &results {
        agreeing += usize::from(v.agrees);
        for (k, (x, x2)) in eig.iter().zip(eig2).enumerate() {
            let digits = scalars::agreeing_digits(x, x2);
            report.push(vec![
                Cell::int(v.d),
                Cell::int(v.n),
                Cell::int(v.m),
                Cell::int(k),
                Cell::number(x, EIGENVALUE_DIGITS, digits),
                Cell::int(digits),
                Cell::Bool(v.min_index_set.contains(&k)),
                Cell::Bool(v.predicted_indices.contains(&k)),
            ]);
        }
    }
    report.summary.push(("instances", json!(results.len())));
    report.summary.push(("minima_as_predicted", json!(agreeing)));
    for (v, _, _) in &results {
        report.summary.push(("minimal_indices", json!(format!("d={} n={} m={}: {}", v.d, v.n, v.m, index_list(&v.min_index_set)))));
    }
    report.summary.push(("uncertified_cells", json!(report.uncertified_cells())));
    Ok(report)
}

/// `κ₂(T_n^d)`, `κ₂(C_m^d)` and the constant `1/λ_∞^d` over the sizes.
pub fn figure52(config: &RunConfig) -> Result<Report> {
    let cells = compute_cells(config, true)?;
    let mut report = Report::new(vec!["d", "n", "m", "kappa_T", "kappa_C", "inv_lambda_inf", "oracle"]);
    for &d in &config.degrees {
        let inv = Rational::from(theory::lambda_infinity_sum(d)?.recip_ref());
        for &n in &config.sizes {
            let cell = &cells[&(d, n)];
            let (m, c) = cell.c.as_ref().expect("circulant computed");
            report.push(vec![
                Cell::int(d),
                Cell::int(n),
                Cell::int(*m),
                Cell::number(&cell.t.condition, FIGURE_DIGITS, cell.t.certified_digits),
                Cell::number(&c.condition, FIGURE_DIGITS, c.certified_digits),
                exact_number(&inv, FIGURE_DIGITS),
                oracle_cell(cell.oracle),
            ]);
        }
    }
    finish_cross_checks(&mut report);
    Ok(report)
}

/// `(d, n)` cells audited by `scan`, grouped by periodization order.
pub fn scan_cells(config: &RunConfig) -> BTreeMap<usize, Vec<(u32, usize)>> {
    let mut groups: BTreeMap<usize, Vec<(u32, usize)>> = BTreeMap::new();
    if config.sizes.is_empty() {
        for &d in &config.degrees {
            let r = d as usize / 2;
            for m in 2 * r + 1..=config.max_order {
                groups.entry(m).or_default().push((d, m + d as usize - r));
            }
        }
    } else {
        for (d, n) in grid(config) {
            let r = d as usize / 2;
            groups.entry(n - d as usize + r).or_default().push((d, n));
        }
    }
    groups
}

/// Audits every cell, sharing one cosine table per order; results are in
/// `(d, n)` order.
pub fn audit_cells(groups: &BTreeMap<usize, Vec<(u32, usize)>>, precision: u32) -> Result<Vec<ConjectureVerdict>> {
    let per_order: Vec<Vec<ConjectureVerdict>> = groups
        .par_iter()
        .map(|(&m, cells)| {
            let table = CosineTable::new(m, precision)?;
            cells.iter().map(|&(d, n)| Ok(theory::conjecture_audit_with(d, n, &table)?)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<ConjectureVerdict> = per_order.into_iter().flatten().collect();
    all.sort_by_key(|v| (v.d, v.n));
    Ok(all)
}

/// Describes a verdict in one line.
pub fn describe(v: &ConjectureVerdict) -> String {
    format!(
        "d={} n={} m={} minima={{{}}} predicted={{{}}} positive_definite={} half_index_identity={} lambda_min={}",
        v.d,
        v.n,
        v.m,
        index_list(&v.min_index_set),
        index_list(&v.predicted_indices),
        v.positive_definite,
        v.half_index_identity.map_or("n/a".to_string(), |b| b.to_string()),
        scalars::format_significant(&v.lambda_min, FIGURE_DIGITS),
    )
}

/// Location of the minimal periodization eigenvalue for every cell.
pub fn scan(config: &RunConfig) -> Result<Report> {
    let verdicts = audit_cells(&scan_cells(config), config.precision)?;
    let mut report = Report::new(vec![
        "d",
        "n",
        "m",
        "min_indices",
        "predicted_indices",
        "agrees",
        "positive_definite",
        "half_index_identity",
        "indeterminate",
        "lambda_min",
        "certified_digits",
        "margin",
    ]);
    let mut counts = [0usize; 5];
    let mut counterexamples = Vec::new();
    for v in &verdicts {
        counts[0] += usize::from(v.agrees);
        counts[1] += usize::from(!v.agrees);
        counts[2] += usize::from(v.indeterminate);
        counts[3] += usize::from(!v.positive_definite);
        counts[4] += usize::from(v.half_index_identity == Some(false));
        if v.is_counterexample() {
            counterexamples.push(describe(v));
        }
        report.push(vec![
            Cell::int(v.d),
            Cell::int(v.n),
            Cell::int(v.m),
            Cell::text(index_list(&v.min_index_set)),
            Cell::text(index_list(&v.predicted_indices)),
            Cell::Bool(v.agrees),
            Cell::Bool(v.positive_definite),
            v.half_index_identity.map_or(Cell::Empty, Cell::Bool),
            Cell::Bool(v.indeterminate),
            Cell::number(&v.lambda_min, FIGURE_DIGITS, v.certified_digits),
            Cell::int(v.certified_digits),
            Cell::text(format!("{:.6e}", v.margin.to_f64())),
        ]);
    }
    report.counterexamples = counterexamples.len();
    report.summary.push(("cells", json!(verdicts.len())));
    report.summary.push(("agree", json!(counts[0])));
    report.summary.push(("disagree", json!(counts[1])));
    report.summary.push(("indeterminate", json!(counts[2])));
    report.summary.push(("not_positive_definite", json!(counts[3])));
    report.summary.push(("half_index_identity_failures", json!(counts[4])));
    report.summary.push(("uncertified_cells", json!(report.uncertified_cells())));
    report.summary.push(("counterexamples", json!(counterexamples)));
    Ok(report)
}

/// `λ_∞^d` from the symbol and from tangent/Euler numbers.
pub fn lambda_inf(config: &RunConfig) -> Result<Report> {
    let mut report = Report::new(vec![
        "d",
        "sequence",
        "sequence_value",
        "lambda_inf",
        "lambda_inf_decimal",
        "inv_lambda_inf",
        "inv_lambda_inf_decimal",
        "theorem_agrees",
    ]);
    let mut failures = 0;
    for &d in &config.degrees {
        let sum = theory::lambda_infinity_sum(d)?;
        let thm = theory::lambda_infinity_theorem(d);
        let (name, value) = if d % 2 == 1 {
            (format!("T_{d}"), theory::tangent_number(d))
        } else {
            (format!("E_{d}"), theory::euler_number(d))
        };
        let inv = Rational::from(sum.recip_ref());
        failures += usize::from(sum != thm);
        report.push(vec![
            Cell::int(d),
            Cell::text(name),
            Cell::text(value.to_string()),
            Cell::exact(&sum),
            exact_number(&sum, FIGURE_DIGITS),
            Cell::exact(&inv),
            exact_number(&inv, FIGURE_DIGITS),
            Cell::Bool(sum == thm),
        ]);
    }
    report.cross_check_failures = failures;
    report.summary.push(("rows", json!(report.rows.len())));
    report.summary.push(("theorem_failures", json!(failures)));
    Ok(report)
}

fn plan_row(d: u32, n: usize, plan: &EmbeddingPlan, detail: String) -> Vec<Cell> {
    vec![
        Cell::int(d),
        Cell::int(n),
        Cell::text(plan.kind.as_str()),
        Cell::int(plan.source_order),
        Cell::int(plan.target_order),
        plan.padded_size.map_or(Cell::Empty, Cell::int),
        Cell::text(plan.guarantees.as_str()),
        Cell::text(detail),
    ]
}

fn embed_rows(d: u32, n: usize, precision: u32) -> Result<Vec<Vec<Cell>>> {
    let t = build_toeplitz(d, n)?;
    let order = t.order();
    let c = periodize(&t);
    let c_report = circulant_condition(&c, precision)?;
    let t_report = toeplitz_condition(&t, precision)?;
    let kappa = &t_report.condition;
    let kappa_text = scalars::format_significant(kappa, TABLE_DIGITS);
    let ferreira = ferreira_embed(&t, precision)?;
    let sized = |kind: EmbeddingKind, target: u64| EmbeddingPlan {
        kind,
        source_order: order,
        target_order: target as usize,
        padded_size: None,
        guarantees: Guarantee::PositiveSemidefinite,
    };
    let prime = prime_embedding_order(d, n)?;
    let prime_c = periodize(&build_toeplitz(d, prime.padded_size.expect("padded"))?);
    let prime_min = spectra::circulant_condition(&prime_c, precision)?.lambda_min;
    Ok(vec![
        plan_row(d, n, &periodization_plan(&t), format!(
            "lambda_min={}",
            scalars::format_significant(&c_report.lambda_min, TABLE_DIGITS)
        )),
        plan_row(d, n, &prime, format!("lambda_min={}", scalars::format_significant(&prime_min, TABLE_DIGITS))),
        plan_row(d, n, &ferreira.plan, format!(
            "verdict={} value={:.6e}",
            ferreira.verdict.as_str(),
            ferreira.condition_value.to_f64()
        )),
        plan_row(d, n, &sized(EmbeddingKind::DemboMallowsShepp, dms_order(order as u64, kappa)?), format!("kappa={kappa_text}")),
        plan_row(
            d,
            n,
            &sized(EmbeddingKind::NewsamDietrich, newsam_dietrich_order(order as u64, kappa)?),
            format!("kappa={kappa_text}"),
        ),
    ])
}

/// Sizes and guarantees of the circulant embeddings of `T_n^d`.
pub fn embed_plan(config: &RunConfig) -> Result<Report> {
    let blocks: Vec<Vec<Vec<Cell>>> =
        grid(config).into_par_iter().map(|(d, n)| embed_rows(d, n, config.precision)).collect::<Result<_>>()?;
    let mut report = Report::new(vec![
        "d",
        "n",
        "kind",
        "source_order",
        "target_order",
        "padded_size",
        "guarantees",
        "detail",
    ]);
    for row in blocks.into_iter().flatten() {
        report.push(row);
    }
    report.summary.push(("rows", json!(report.rows.len())));
    Ok(report)
}
