//! Command-line front end: parse definition files, dispatch to the engine,
//! and emit a single report per run (human table or JSON).
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 input error.

use std::path::{Path, PathBuf};
use std::process::exit;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use conformal::algebra::LscAlgebra;
use conformal::cohomology::{
    coboundary_solve, d_lie, d_lie_map, delta_lsc, h_dim_bounded, phi_inv, tuples, Cochain, Flavor,
    LieModule,
};
use conformal::deform::{
    check_linear_deformation, formal_check, formal_normalize, nijenhuis_deformed,
    nijenhuis_residuals, tilde_omega, trivial_equiv_check,
};
use conformal::lang::{parse_definition, render_definition, render_element, DefinitionFile};
use conformal::rep::{adjoint_rep, coadjoint_rep, semidirect, RepPair};
use conformal::report::{Check, Report};
use conformal::tstar::{check_bilinear, check_isometry, general_coadjoint_extend, tstar_equiv, tstar_extend};
use conformal::{Element, Error, FreeModule, LambdaMap, ModuleMap};

#[derive(Parser)]
#[command(name = "conformal", version, about = "Exact checker for left-symmetric and Lie conformal algebras")]
struct Cli {
    /// emit the report as JSON instead of a table
    #[arg(long, global = true)]
    json: bool,
    /// degree cap for candidate cocycles
    #[arg(long, global = true, default_value_t = 4)]
    degree_z: u32,
    /// degree cap for coboundary witnesses
    #[arg(long, global = true, default_value_t = 6)]
    degree_b: u32,
    /// truncation order for formal deformations
    #[arg(long, global = true, default_value_t = 4)]
    order: usize,
    /// seed for randomized suites; accepted for script compatibility,
    /// every command here is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the left-symmetric axioms of the algebra in FILE
    CheckLsc { file: PathBuf },
    /// Check the Lie conformal axioms of the bracket in FILE
    CheckLie { file: PathBuf },
    /// Print and check the sub-adjacent Lie bracket
    SubAdjacent { file: PathBuf },
    /// Check the module identities of the laction/raction blocks
    CheckModule { file: PathBuf },
    /// Print the adjoint representation tables
    Adjoint { file: PathBuf },
    /// Print the coadjoint representation tables
    Coadjoint { file: PathBuf },
    /// Build and check the semidirect product with the declared module
    Semidirect { file: PathBuf },
    /// Apply the left-symmetric coboundary to the declared cochain
    Delta { file: PathBuf },
    /// Apply the Lie conformal coboundary to the declared cochain
    DLie { file: PathBuf },
    /// Verify delta(Phi g) = Phi(d g) for the declared cochain
    PhiDiagram { file: PathBuf },
    /// Test whether the declared cochain is a cocycle
    IsCocycle { file: PathBuf },
    /// Search for a coboundary witness of the declared cochain
    SolveCoboundary { file: PathBuf },
    /// Bounded-degree cohomology dimension estimate
    HDim {
        file: PathBuf,
        /// cochain degree
        #[arg(short, long, default_value_t = 2)]
        n: usize,
    },
    /// Check the declared 2-cochain as a linear deformation
    CheckDeformation { file: PathBuf },
    /// Test the declared map for the Nijenhuis identity
    Nijenhuis { file: PathBuf },
    /// Test whether the declared deformation is trivialized by the map
    TrivialEquiv { file: PathBuf },
    /// Check a truncated formal deformation order by order
    FormalCheck { file: PathBuf },
    /// Normalize a formal deformation by absorbing coboundary orders
    FormalNormalize { file: PathBuf },
    /// Print the skew-symmetrization of the declared 2-cochain
    TildeOmega { file: PathBuf },
    /// Check the declared bilinear form (symmetric, invariant, non-degenerate)
    CheckBilinear { file: PathBuf },
    /// Build the T*-extension by a dual-valued 2-cocycle
    TstarExtend {
        file: PathBuf,
        /// definition file providing the cocycle (defaults to zero, or to a
        /// cochain block in FILE)
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Build the general coadjoint extension and check the axioms
    CoadjointExtend {
        file: PathBuf,
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Decide equivalence of two T*-extensions through the declared map
    TstarEquiv { file: PathBuf },
    /// Check the declared map as an isometry of the declared form
    CheckIsometry { file: PathBuf },
}

fn load(path: &Path) -> Result<DefinitionFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_definition(&text)
}

fn lambda_table_lines(left: &Arc<FreeModule>, lam: &LambdaMap) -> Vec<String> {
    let mut lines = Vec::new();
    for i in 0..left.rank() {
        for j in 0..lam.right.rank() {
            let v = lam.entry(i, j);
            if !v.is_zero() {
                lines.push(format!(
                    "{} {} = {}",
                    left.basis[i],
                    lam.right.basis[j],
                    render_element(v)
                ));
            }
        }
    }
    if lines.is_empty() {
        lines.push("0".to_string());
    }
    lines
}

fn cochain_lines(c: &Cochain) -> Vec<String> {
    let mut lines = Vec::new();
    for t in tuples(c.source.rank(), c.n) {
        let v = c.get(&t);
        if !v.is_zero() {
            let names: Vec<&str> = t.iter().map(|&i| c.source.basis[i].as_str()).collect();
            lines.push(format!("{} = {}", names.join(" "), render_element(v)));
        }
    }
    if lines.is_empty() {
        lines.push("0".to_string());
    }
    lines
}

fn zero_check(report: &mut Report, name: &str, c: &Cochain) {
    let mut lines = Vec::new();
    for t in tuples(c.source.rank(), c.n) {
        let v = c.get(&t);
        if !v.is_zero() {
            let names: Vec<&str> = t.iter().map(|&i| c.source.basis[i].as_str()).collect();
            lines.push((format!("({})", names.join(",")), render_element(v)));
        }
    }
    let mut cr = conformal::report::CheckReport::default();
    for (label, value) in lines {
        cr.push(label, value);
    }
    report.add_check(Check::from_report(name, cr));
}

/// A cochain or map in a definition file is entered with coefficients on the
/// source basis; commands on the conformal dual reread the same coefficients
/// against the starred basis.
fn into_dual_cochain(c: &Cochain, dual: &Arc<FreeModule>) -> Cochain {
    let mut out = Cochain::zero(c.ring(), &c.source, dual, c.n, c.flavor);
    for t in tuples(c.source.rank(), c.n) {
        out.set(&t, Element::new(dual, c.get(&t).coeffs.clone()));
    }
    out
}

fn into_dual_map(m: &ModuleMap, dual: &Arc<FreeModule>) -> ModuleMap {
    let images = m
        .mat
        .iter()
        .map(|e| Element::new(dual, e.coeffs.clone()))
        .collect();
    ModuleMap::from_images(&m.source, images)
}

/// The representation the cohomology commands act in: the module declared in
/// the file when present, the adjoint otherwise.
fn pick_rep(df: &DefinitionFile, a: &LscAlgebra) -> RepPair {
    match df.rep() {
        Ok(rep) => rep,
        Err(_) => adjoint_rep(a),
    }
}

/// The dual-valued 2-cochain for the extension commands: from `--omega`,
/// else from a cochain block in the main file, else zero.
fn pick_omega(
    df: &DefinitionFile,
    a: &LscAlgebra,
    omega_path: &Option<PathBuf>,
) -> Result<Cochain, Error> {
    let dual = a.module.dual();
    let c = match omega_path {
        Some(p) => {
            let odf = load(p)?;
            if odf.ring != df.ring {
                return Err(Error::Input(
                    "parameter declarations must match between files".into(),
                ));
            }
            let c = odf.cochain()?.clone();
            if c.source != a.module {
                return Err(Error::Input(
                    "cocycle file must declare the same algebra basis".into(),
                ));
            }
            c
        }
        None => match df.cochain() {
            Ok(c) => c.clone(),
            Err(_) => Cochain::zero(&df.ring, &a.module, &a.module, 2, Flavor::Lsc),
        },
    };
    if c.n != 2 {
        return Err(Error::Input("extension cocycles must have degree 2".into()));
    }
    Ok(into_dual_cochain(&c, &dual))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.cmd {
        Cmd::CheckLsc { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let mut report = Report::new("check-lsc");
            report.add_check(Check::from_report("left-symmetric axioms", a.check_axioms()));
            report.add_table("product", lambda_table_lines(&a.module, &a.product));
            Ok(report)
        }
        Cmd::CheckLie { file } => {
            let df = load(file)?;
            let g = df.lie()?;
            let mut report = Report::new("check-lie");
            report.add_check(Check::from_report("lie conformal axioms", g.check_axioms()));
            report.add_table("bracket", lambda_table_lines(&g.module, &g.bracket));
            Ok(report)
        }
        Cmd::SubAdjacent { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let g = a.sub_adjacent();
            let mut report = Report::new("sub-adjacent");
            report.add_check(Check::from_report("lie conformal axioms", g.check_axioms()));
            report.add_table("bracket", lambda_table_lines(&g.module, &g.bracket));
            Ok(report)
        }
        Cmd::CheckModule { file } => {
            let df = load(file)?;
            let rep = df.rep()?;
            let mut report = Report::new("check-module");
            report.add_check(Check::from_report("module identities", rep.check()));
            Ok(report)
        }
        Cmd::Adjoint { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = adjoint_rep(&a);
            let mut report = Report::new("adjoint");
            report.add_check(Check::from_report("module identities", rep.check()));
            report.add_table("laction", lambda_table_lines(&a.module, &rep.l));
            report.add_table("raction", lambda_table_lines(&a.module, &rep.r));
            Ok(report)
        }
        Cmd::Coadjoint { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = coadjoint_rep(&a);
            let mut report = Report::new("coadjoint");
            report.add_check(Check::from_report("module identities", rep.check()));
            report.add_table("laction", lambda_table_lines(&a.module, &rep.l));
            report.add_table("raction", lambda_table_lines(&a.module, &rep.r));
            Ok(report)
        }
        Cmd::Semidirect { file } => {
            let df = load(file)?;
            let rep = df.rep()?;
            let s = semidirect(&rep.algebra, &rep);
            let mut report = Report::new("semidirect");
            report.add_check(Check::from_report("left-symmetric axioms", s.check_axioms()));
            report.add_table("product", lambda_table_lines(&s.module, &s.product));
            Ok(report)
        }
        Cmd::Delta { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = pick_rep(&df, &a);
            let c = df.cochain()?;
            let out = delta_lsc(&rep, c);
            let mut report = Report::new("delta");
            report.add_table("delta", cochain_lines(&out));
            Ok(report)
        }
        Cmd::DLie { file } => {
            let df = load(file)?;
            let g = df.lie()?;
            let m = LieModule::adjoint(&g);
            let c = df.cochain()?;
            let out = d_lie(&m, c);
            let mut report = Report::new("d-lie");
            report.add_table("d", cochain_lines(&out));
            Ok(report)
        }
        Cmd::PhiDiagram { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = pick_rep(&df, &a);
            let c = df.cochain()?;
            if c.n < 2 {
                return Err(Error::Input("the diagram check needs a cochain of degree >= 2".into()));
            }
            let gamma = phi_inv(c);
            let lhs = delta_lsc(&rep, c);
            let rhs = conformal::cohomology::phi(&d_lie_map(&a, &rep, &gamma));
            let mut report = Report::new("phi-diagram");
            zero_check(&mut report, "delta(Phi g) = Phi(d g)", &lhs.sub(&rhs));
            Ok(report)
        }
        Cmd::IsCocycle { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = pick_rep(&df, &a);
            let c = df.cochain()?;
            let mut report = Report::new("is-cocycle");
            zero_check(&mut report, "delta = 0", &delta_lsc(&rep, c));
            Ok(report)
        }
        Cmd::SolveCoboundary { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = pick_rep(&df, &a);
            let c = df.cochain()?;
            let mut report = Report::new("solve-coboundary");
            match coboundary_solve(&rep, c, cli.degree_b) {
                Some(eta) => {
                    report.add_check(Check::flag("witness found", true));
                    zero_check(&mut report, "delta(witness) = omega", &delta_lsc(&rep, &eta).sub(c));
                    report.add_table("witness", cochain_lines(&eta));
                }
                None => {
                    report.add_check(Check::flag(
                        &format!("no coboundary witness of degree <= {}", cli.degree_b),
                        false,
                    ));
                }
            }
            Ok(report)
        }
        Cmd::HDim { file, n } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let rep = pick_rep(&df, &a);
            let r = h_dim_bounded(&rep, *n, cli.degree_z, cli.degree_b);
            let mut report = Report::new("h-dim");
            report.add_table(
                "bounded-degree cohomology",
                vec![
                    format!("n = {}", r.n),
                    format!("dim Z (degree <= {}) = {}", r.degree_z, r.dim_z),
                    format!("dim B within Z (degree <= {}) = {}", r.degree_b, r.dim_b),
                    format!("H estimate <= {}", r.estimate),
                ],
            );
            Ok(report)
        }
        Cmd::CheckDeformation { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let c = df.cochain()?;
            Ok(check_linear_deformation(&a, c))
        }
        Cmd::Nijenhuis { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let n = df.module_map()?;
            let mut report = Report::new("nijenhuis");
            report.add_check(Check::from_report(
                "nijenhuis identity",
                nijenhuis_residuals(&a, n),
            ));
            if let Ok(d) = nijenhuis_deformed(&a, n) {
                report.add_table("deformed product", lambda_table_lines(&d.module, &d.product));
            }
            Ok(report)
        }
        Cmd::TrivialEquiv { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let c = df.cochain()?;
            let n = df.module_map()?;
            Ok(trivial_equiv_check(&a, c, n))
        }
        Cmd::FormalCheck { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let thetas = formal_family(&df, &a, cli.order)?;
            Ok(formal_check(&a, &thetas))
        }
        Cmd::FormalNormalize { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let thetas = formal_family(&df, &a, cli.order)?;
            let out = formal_normalize(&a, &thetas, cli.degree_b);
            let mut report = Report::new("formal-normalize");
            for (i, phi) in out.phis.iter().enumerate() {
                let lines: Vec<String> = a
                    .module
                    .basis
                    .iter()
                    .zip(&phi.mat)
                    .map(|(b, img)| format!("{} = {}", b, render_element(img)))
                    .collect();
                report.add_table(&format!("phi_{}", i + 1), lines);
            }
            for (i, t) in out.transported.iter().enumerate() {
                report.add_table(&format!("theta'_{}", i + 1), cochain_lines(t));
            }
            match &out.obstruction {
                None => report.add_check(Check::flag("trivialized at every order", true)),
                Some((order, rem)) => {
                    let mut cr = conformal::report::CheckReport::default();
                    for t in tuples(rem.source.rank(), rem.n) {
                        let v = rem.get(&t);
                        if !v.is_zero() {
                            let names: Vec<&str> =
                                t.iter().map(|&i| rem.source.basis[i].as_str()).collect();
                            cr.push(format!("({})", names.join(",")), render_element(v));
                        }
                    }
                    report.add_check(Check::from_report(
                        &format!("obstruction at order {order}"),
                        cr,
                    ));
                }
            }
            Ok(report)
        }
        Cmd::TildeOmega { file } => {
            let df = load(file)?;
            let c = df.cochain()?;
            if c.n != 2 {
                return Err(Error::Input("tilde-omega needs a 2-cochain".into()));
            }
            let mut report = Report::new("tilde-omega");
            report.add_table("tilde omega", cochain_lines(&tilde_omega(c)));
            Ok(report)
        }
        Cmd::CheckBilinear { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let b = df.form()?;
            Ok(check_bilinear(&a, b))
        }
        Cmd::TstarExtend { file, omega } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let w = pick_omega(&df, &a, omega)?;
            let mut report = Report::new("tstar-extend");
            match tstar_extend(&a, &w) {
                Ok(ext) => {
                    report.add_check(Check::flag("omega is an invariant 2-cocycle", true));
                    let bil = check_bilinear(&ext.extension, &ext.form);
                    for c in bil.checks {
                        report.add_check(c);
                    }
                    report.add_table(
                        "product",
                        lambda_table_lines(&ext.extension.module, &ext.extension.product),
                    );
                    let form_lines: Vec<String> = ext
                        .form
                        .mat
                        .iter()
                        .map(|row| {
                            row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                        })
                        .collect();
                    report.add_table("form", form_lines);
                }
                Err(e) => {
                    let mut cr = conformal::report::CheckReport::default();
                    cr.push("rejected".into(), e.to_string());
                    report.add_check(Check::from_report("omega is an invariant 2-cocycle", cr));
                }
            }
            Ok(report)
        }
        Cmd::CoadjointExtend { file, omega } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let w = pick_omega(&df, &a, omega)?;
            let ext = general_coadjoint_extend(&a, &w);
            let mut report = Report::new("coadjoint-extend");
            report.add_check(Check::from_report("left-symmetric axioms", ext.check_axioms()));
            report.add_table("product", lambda_table_lines(&ext.module, &ext.product));
            Ok(report)
        }
        Cmd::TstarEquiv { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let dual = a.module.dual();
            let cochains: Vec<&Cochain> = df
                .modules
                .iter()
                .flat_map(|d| d.cochains.iter())
                .filter(|c| c.n == 2)
                .collect();
            let zero = Cochain::zero(&df.ring, &a.module, &dual, 2, Flavor::Lsc);
            let w1 = cochains
                .first()
                .map(|c| into_dual_cochain(c, &dual))
                .unwrap_or_else(|| zero.clone());
            let w2 = cochains
                .get(1)
                .map(|c| into_dual_cochain(c, &dual))
                .unwrap_or_else(|| zero.clone());
            let theta = into_dual_map(df.module_map()?, &dual);
            Ok(tstar_equiv(&a, &w1, &w2, &theta).report)
        }
        Cmd::CheckIsometry { file } => {
            let df = load(file)?;
            let a = df.lsc()?;
            let b = df.form()?;
            let phi = df.module_map()?;
            let mut report = Report::new("check-isometry");
            report.add_check(Check::flag(
                "map is an isometric automorphism",
                check_isometry(phi, &a, b, &a, b),
            ));
            Ok(report)
        }
    }
}

/// The formal family theta_1..theta_k from the file's 2-cochain blocks,
/// padded with zeros up to the truncation order.
fn formal_family(df: &DefinitionFile, a: &LscAlgebra, order: usize) -> Result<Vec<Cochain>, Error> {
    let mut thetas: Vec<Cochain> = df
        .modules
        .iter()
        .flat_map(|d| d.cochains.iter())
        .filter(|c| c.n == 2)
        .cloned()
        .collect();
    if thetas.is_empty() {
        return Err(Error::Input("no 2-cochain blocks in input".into()));
    }
    while thetas.len() < order {
        thetas.push(Cochain::zero(&df.ring, &a.module, &a.module, 2, Flavor::Lsc));
    }
    thetas.truncate(order.max(1));
    Ok(thetas)
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print!("{}", report.render_human());
            }
            exit(if report.pass { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(2);
        }
    }
}

// keep the canonical renderer reachable from scripts: `conformal` rewrites a
// file to normal form when asked to (used by the round-trip tests through
// the library, not a subcommand)
#[allow(dead_code)]
fn normalize_text(text: &str) -> Result<String, Error> {
    Ok(render_definition(&parse_definition(text)?))
}
