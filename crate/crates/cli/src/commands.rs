use semiheat::fixtures::Fixture;
use semiheat::invariants::{
    constancy_detector, constancy_from, invariant_triple_exact, odd_linear_detector,
    sphere_functionals_numeric, support_annulus, ConstancyVerdict, InvariantReport,
    OddLinearVerdict, SqrtLaurent,
};
use semiheat::kantorovitz::{assemble_upsilon, x_chain, GaussianLaurent};
use semiheat::oracle::{fit_expansion, FitOptions, HSweepFit};
use semiheat::symbolcalc::{
    principal_of, rho_odd, sigma_top, subprincipal_of, symbol_chain, GradedSymbol,
};
use serde::Serialize;

use crate::config::JobConfig;
use crate::output::Writer;
use crate::Failure;

/// Largest `m` for `symbols`; the operator chain grows quickly beyond it.
const SYMBOLS_MAX_M: u32 = 8;

#[derive(Serialize)]
struct UpsilonFile<'a> {
    k: u32,
    rendered: String,
    upsilon: &'a GaussianLaurent,
}

pub fn run_expand(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    let v = cfg.load_polynomial()?;
    let ups = assemble_upsilon(&v, cfg.order)?;
    let mut text = format!("V = {v}\n");
    for (k, u) in ups.iter().enumerate() {
        let rendered = u.to_string();
        text += &format!("Upsilon_{k} = {rendered}\n");
        w.json(
            &format!("upsilon_{k}.json"),
            &UpsilonFile {
                k: k as u32,
                rendered,
                upsilon: u,
            },
        )?;
    }
    w.text("upsilon.txt", &text)?;
    Ok(())
}

#[derive(Serialize)]
struct SymbolEntry {
    m: u32,
    principal: GradedSymbol,
    subprincipal: GradedSymbol,
    principal_rendered: Vec<(i32, String)>,
    subprincipal_rendered: Vec<(i32, String)>,
    top: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<GaussianLaurent>,
    matches_operators: bool,
}

#[derive(Serialize)]
struct SymbolsFile {
    potential: String,
    symbols: Vec<SymbolEntry>,
}

fn rendered(s: &GradedSymbol) -> Vec<(i32, String)> {
    s.grades().map(|(e, p)| (e, p.to_string())).collect()
}

pub fn run_symbols(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    if cfg.m_max > SYMBOLS_MAX_M {
        return Err(Failure::Resource(format!(
            "symbols limited to m ≤ {SYMBOLS_MAX_M}, got {}",
            cfg.m_max
        )));
    }
    let v = cfg.load_polynomial()?;
    let ops = x_chain(&v, cfg.m_max)?;
    let chain = symbol_chain(&v, cfg.m_max)?;
    let mut entries = Vec::new();
    let mut mismatch = None;
    for (k, (sigma, sub)) in chain.into_iter().enumerate() {
        let m = k as u32 + 1;
        let op = &ops[m as usize];
        let ok = sigma == principal_of(op) && sub == subprincipal_of(op);
        if !ok && mismatch.is_none() {
            mismatch = Some(m);
        }
        entries.push(SymbolEntry {
            m,
            principal_rendered: rendered(&sigma),
            subprincipal_rendered: rendered(&sub),
            top: sigma_top(m, &v)?.to_string(),
            rho: if m % 2 == 1 {
                Some(rho_odd(&sigma)?)
            } else {
                None
            },
            principal: sigma,
            subprincipal: sub,
            matches_operators: ok,
        });
    }
    w.json(
        "symbols.json",
        &SymbolsFile {
            potential: v.to_string(),
            symbols: entries,
        },
    )?;
    if let Some(m) = mismatch {
        return Err(Failure::Check(format!(
            "symbol recursion disagrees with the operator tier at m = {m}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SymbolicPoint {
    x: f64,
    upsilon0: f64,
    upsilon1: f64,
}

#[derive(Serialize)]
struct OracleFile<'a> {
    fit: &'a HSweepFit,
    symbolic: Vec<SymbolicPoint>,
}

pub fn run_oracle(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    let v = cfg.load_polynomial()?;
    if cfg.dim != 1 {
        return Err(anyhow::anyhow!(
            "the ħ-sweep runs in one dimension only, got dim = {}",
            cfg.dim
        )
        .into());
    }
    let opts = FitOptions {
        terms: 3.min(cfg.hbar.len()),
        tol: cfg.tol,
        basis: cfg.basis,
    };
    let fit = fit_expansion(&v, cfg.s, &cfg.x, &cfg.hbar, &opts)?;
    for msg in &fit.warnings {
        eprintln!("warning: {msg}");
    }
    let ups = assemble_upsilon(&v, 1)?;
    let symbolic = cfg
        .x
        .iter()
        .map(|&x| SymbolicPoint {
            x,
            upsilon0: ups[0].eval(cfg.s, &[x]),
            upsilon1: ups[1].eval(cfg.s, &[x]),
        })
        .collect();
    w.text("sweep.csv", &fit.to_csv())?;
    w.json(
        "report.json",
        &OracleFile {
            fit: &fit,
            symbolic,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct InvariantsFile<'a> {
    potential: String,
    exact: [SqrtLaurent; 3],
    report: &'a InvariantReport,
}

pub fn run_invariants(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    let v = cfg.load_polynomial()?;
    let report = InvariantReport::build(&v, &cfg.s_grid, &cfg.r_grid)?;
    w.text("invariants.csv", &report.to_csv())?;
    w.json(
        "report.json",
        &InvariantsFile {
            potential: v.to_string(),
            exact: invariant_triple_exact(&v),
            report: &report,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct DetectFile {
    potential: String,
    constancy: Vec<ConstancyVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_linear: Option<Vec<OddLinearVerdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_linear_skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    support: Option<(f64, f64)>,
}

pub fn run_detect(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    let file = match cfg.load_potential()? {
        Fixture::Polynomial(v) => {
            let constancy = cfg
                .r_grid
                .iter()
                .map(|&r| constancy_detector(&v, r, cfg.tol))
                .collect::<Result<Vec<_>, _>>()?;
            let (odd_linear, skipped) = if !v.is_odd() {
                (None, Some("potential is not odd".to_string()))
            } else if v.dim() < 2 {
                (None, Some("the degree-one test needs n ≥ 2".to_string()))
            } else {
                let d = cfg
                    .r_grid
                    .iter()
                    .map(|&r| odd_linear_detector(&v, r, cfg.tol))
                    .collect::<Result<Vec<_>, _>>()?;
                (Some(d), None)
            };
            DetectFile {
                potential: v.to_string(),
                constancy,
                odd_linear,
                odd_linear_skipped: skipped,
                support: None,
            }
        }
        Fixture::Numeric(bump) => {
            if cfg.dim > 2 {
                return Err(anyhow::anyhow!(
                    "numeric fixtures are evaluated for n ≤ 2, got {}",
                    cfg.dim
                )
                .into());
            }
            let f = |x: &[f64]| bump.eval(x);
            let constancy = cfg
                .r_grid
                .iter()
                .map(|&r| {
                    constancy_from(&sphere_functionals_numeric(&f, cfg.dim, r, 256)?, cfg.tol)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let support = support_annulus(&f, cfg.dim, &cfg.r_grid, 1e-9)?;
            DetectFile {
                potential: format!("radial-bump({}, {})", bump.r1, bump.r2),
                constancy,
                odd_linear: None,
                odd_linear_skipped: Some("potential is not odd".into()),
                support,
            }
        }
    };
    w.json("report.json", &file)?;
    Ok(())
}
