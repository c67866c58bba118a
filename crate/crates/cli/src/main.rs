//! Command-line front end: per-query classification, table regeneration,
//! genus utilities and the gluing oracle.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use isometry_atlas::classify::{
    self, deformation_data, enumerate_nontrivial, enumerate_trivial, ClassificationRow,
    DiscAction, FigureId, TableId, TypeName,
};
use isometry_atlas::genus::{symbol_from_lattice, GenusSymbol};
use isometry_atlas::glue;
use isometry_atlas::hermitian::HermitianGram;
use isometry_atlas::lattice::CatalogExpr;

#[derive(Parser)]
#[command(
    name = "isometry-atlas",
    version,
    about = "Classification of finite-order isometries with cyclotomic minimal polynomial \
             on the even unimodular lattices of the known IHS deformation types"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Exit with status 1 when a result contains an unknown class count.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify isometries for one deformation type.
    Classify(ClassifyArgs),
    /// Regenerate the published classification tables.
    Tables(TablesArgs),
    /// Genus symbol of a catalog lattice expression.
    GenusOf { expr: String },
    /// Evaluate the nonemptiness predicate of a genus symbol.
    Exists {
        #[arg(long)]
        genus: String,
    },
    /// Cyclotomic field invariants of Q(zeta_m).
    Cyclo {
        #[arg(long)]
        m: u64,
    },
    /// Trace lattice of a hermitian form over Z[zeta_m], with its audit.
    Trace {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        herm: String,
    },
    /// Run the constructive gluing oracle suite.
    GlueAudit {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Deformation type: K3, K3n, Kum, OG6, OG10.
    #[arg(long = "type")]
    ty: String,
    /// Parameter n for the K3n and Kum families.
    #[arg(long)]
    n: Option<u32>,
    /// Restrict to one order.
    #[arg(long)]
    order: Option<u64>,
    /// Discriminant action: trivial or nontrivial.
    #[arg(long, default_value = "trivial")]
    disc: String,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
}

#[derive(Args)]
struct TablesArgs {
    /// Regenerate everything.
    #[arg(long)]
    all: bool,
    /// One table: 1a, 1b, 1c, 1d, fig2, fig3.
    #[arg(long)]
    table: Option<String>,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Write golden files into a directory instead of printing.
    #[arg(long)]
    write_golden: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("ISOMETRY_ATLAS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Classify(args) => {
            let name = parse_type(&args.ty, args.n)?;
            let t = deformation_data(name);
            let action = match args.disc.as_str() {
                "trivial" => DiscAction::Trivial,
                "nontrivial" => DiscAction::Nontrivial,
                other => return Err(format!("unknown discriminant action: {other}")),
            };
            let mut rows = match action {
                DiscAction::Trivial => enumerate_trivial(&t),
                DiscAction::Nontrivial => enumerate_nontrivial(&t),
            };
            if let Some(m) = args.order {
                rows.retain(|r| r.m.contains(&m));
            }
            let unknown = rows.iter().any(|r| r.classes.is_none());
            emit_rows(&rows, args.format)?;
            if cli.strict && unknown {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables(args) => {
            let units: Vec<String> = if args.all || args.table.is_none() {
                ["1a", "1b", "1c", "1d", "fig2", "fig3"]
                    .into_iter()
                    .map(String::from)
                    .collect()
            } else {
                vec![args.table.clone().unwrap()]
            };
            use rayon::prelude::*;
            let rendered: Result<Vec<_>, String> = units
                .par_iter()
                .map(|unit| render_unit(unit, args.format).map(|r| (unit.clone(), r)))
                .collect();
            let rendered = rendered?;
            let mut unknown = false;
            for (unit, (text, rows)) in rendered {
                unknown |= rows.iter().any(|r| r.classes.is_none());
                match &args.write_golden {
                    Some(dir) => {
                        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
                        let ext = match args.format {
                            Format::Md => "md",
                            Format::Json => "json",
                            Format::Csv => "csv",
                        };
                        let name = format!("{}.{ext}", unit_filename(&unit));
                        std::fs::write(dir.join(name), text).map_err(|e| e.to_string())?;
                    }
                    None => println!("{text}"),
                }
            }
            if cli.strict && unknown {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GenusOf { expr } => {
            let e = CatalogExpr::parse(&expr).map_err(|e| e.to_string())?;
            let sym = match e.gram() {
                Ok(l) => symbol_from_lattice(&l).map_err(|e| e.to_string())?,
                Err(_) => classify::catalog_genus(&e)
                    .ok_or_else(|| format!("no genus data for {expr}"))?,
            };
            println!("{sym}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Exists { genus } => {
            let sym = GenusSymbol::parse(&genus).map_err(|e| e.to_string())?;
            println!("symbol: {sym}");
            println!("rank: {}", sym.rank());
            println!("determinant: {}", sym.det());
            match classify::symbol_exists(&sym) {
                Some(true) => println!("nonempty: yes"),
                Some(false) => println!("nonempty: no"),
                None => println!("nonempty: outside the supported genus shapes"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cyclo { m } => {
            let inv = isometry_atlas::cyclo::invariants(m).map_err(|e| e.to_string())?;
            println!("m: {}", inv.m);
            println!("phi(m): {}", inv.phi);
            match inv.prime_power {
                Some((p, k)) => println!("prime power: {p}^{k}"),
                None => println!("prime power: no"),
            }
            match inv.alpha {
                Some(a) => println!("different valuation alpha: {a}"),
                None => println!("different valuation alpha: none (no ramified relative place)"),
            }
            if let Some(e) = inv.e {
                println!("relative different valuation: {e}");
            }
            println!("h_minus: {}", inv.h_minus);
            if let Ok(n) = isometry_atlas::cyclo::minus_one_is_local_norm(m) {
                println!(
                    "-1 local norm at the ramified place: {}",
                    if n { "yes" } else { "no" }
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Trace { m, herm } => {
            let h = HermitianGram::parse(m, &herm).map_err(|e| e.to_string())?;
            let lf = h.trace_lattice().map_err(|e| e.to_string())?;
            println!("rank: {}", lf.lattice.rank());
            println!("gram:");
            print!("{:?}", lf.lattice.gram());
            println!("isometry order: {}", lf.order());
            match symbol_from_lattice(&lf.lattice) {
                Ok(s) => println!("genus: {s}"),
                Err(_) => println!("genus: (odd lattice)"),
            }
            let laws = h.verify_trace_laws();
            println!("rank law: {}", pass(laws.rank_ok));
            println!(
                "signature: ({},{}) both even: {}",
                laws.signature.0,
                laws.signature.1,
                pass(laws.signatures_even)
            );
            println!(
                "scale law: {} ({} = {})",
                pass(laws.scale_ok),
                laws.scale_lhs,
                laws.scale_rhs
            );
            println!(
                "norm law: {} ({} = {})",
                pass(laws.norm_ok),
                laws.norm_lhs,
                laws.norm_rhs
            );
            let report = glue::audit(&lf);
            println!("audit order: {}", report.order);
            println!("audit disc action order: {}", report.disc_action_order);
            for (name, ok) in &report.checks {
                println!("audit {}: {}", name, pass(*ok));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GlueAudit { count, seed } => {
            let report = glue_audit_suite(count, seed);
            print!("{report}");
            if report.contains("FAIL") {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn parse_type(s: &str, n: Option<u32>) -> Result<TypeName, String> {
    match s {
        "K3" => Ok(TypeName::K3),
        "K3n" => Ok(TypeName::K3n(n.ok_or("K3n requires --n")?)),
        "Kum" => Ok(TypeName::Kum(n.ok_or("Kum requires --n")?)),
        "OG6" => Ok(TypeName::OG6),
        "OG10" => Ok(TypeName::OG10),
        other => Err(format!("unknown deformation type: {other}")),
    }
}

fn unit_filename(unit: &str) -> String {
    match unit {
        "fig2" => "figure_2".into(),
        "fig3" => "figure_3".into(),
        t => format!("table_{t}"),
    }
}

fn render_unit(unit: &str, format: Format) -> Result<(String, Vec<ClassificationRow>), String> {
    let (md, rows) = match unit {
        "fig2" => (classify::figure_markdown(FigureId::F2), classify::figure_rows(FigureId::F2)),
        "fig3" => (classify::figure_markdown(FigureId::F3), classify::figure_rows(FigureId::F3)),
        t => {
            let id = TableId::parse(t).ok_or_else(|| format!("unknown table: {t}"))?;
            (classify::table_markdown(id), classify::table_rows(id))
        }
    };
    let text = match format {
        Format::Md => md,
        Format::Json => rows_json(&rows)?,
        Format::Csv => rows_csv(&rows)?,
    };
    Ok((text, rows))
}

fn emit_rows(rows: &[ClassificationRow], format: Format) -> Result<(), String> {
    match format {
        Format::Md => {
            println!("| type | m | disc | M^g | M_Phi | Lambda^h | Lambda_h | classes | induced |");
            println!("|---|---|---|---|---|---|---|---|---|");
            for r in rows {
                println!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                    r.ty,
                    r.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
                    r.disc_action,
                    r.inv_symbol,
                    r.coinv_symbol,
                    r.lambda_inv.as_ref().map(|d| d.display()).unwrap_or_default(),
                    r.lambda_coinv.as_ref().map(|d| d.display()).unwrap_or_default(),
                    r.classes.map(|c| c.to_string()).unwrap_or_else(|| "unknown".into()),
                    r.induced.map(|k| k.to_string()).unwrap_or_default(),
                );
            }
            Ok(())
        }
        Format::Json => {
            println!("{}", rows_json(rows)?);
            Ok(())
        }
        Format::Csv => {
            print!("{}", rows_csv(rows)?);
            Ok(())
        }
    }
}

fn rows_json(rows: &[ClassificationRow]) -> Result<String, String> {
    serde_json::to_string_pretty(rows).map_err(|e| e.to_string())
}

fn rows_csv(rows: &[ClassificationRow]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "type", "n", "m", "disc_action", "inv_symbol", "coinv_symbol", "lambda_inv",
        "lambda_coinv", "classes", "induced", "notes",
    ])
    .map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record([
            r.ty.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
            r.disc_action.clone(),
            r.inv_symbol.clone(),
            r.coinv_symbol.clone(),
            r.lambda_inv.as_ref().map(|d| d.display()).unwrap_or_default(),
            r.lambda_coinv.as_ref().map(|d| d.display()).unwrap_or_default(),
            r.classes.map(|c| c.to_string()).unwrap_or_else(|| "unknown".into()),
            r.induced.map(|k| k.to_string()).unwrap_or_default(),
            r.notes.clone().unwrap_or_default(),
        ])
        .map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// The constructive oracle suite: named gluings with audited invariants and
/// a randomized determinant-law check.
fn glue_audit_suite(count: u64, seed: u64) -> String {
    use isometry_atlas::exact::IntMatrix;
    use isometry_atlas::glue::{audit, equivariant_extension, primitive_extension, GlueMap};
    use isometry_atlas::lattice::LatticeWithIsometry;

    let mut out = String::new();
    let mut line = |out: &mut String, name: &str, ok: bool| {
        out.push_str(&format!("{}: {}\n", name, if ok { "pass" } else { "FAIL" }));
    };
    // <2> + <-2> glues to U
    {
        let s = CatalogExpr::parse("<2>").unwrap().gram().unwrap();
        let t = CatalogExpr::parse("<-2>").unwrap().gram().unwrap();
        let glue = GlueMap::from_i64(&[vec![1]], &[vec![1]]);
        let ok = match primitive_extension(&s, &t, &glue) {
            Ok(ext) => {
                symbol_from_lattice(&ext.lattice).map(|s| s == GenusSymbol::unimodular(1, 1))
                    == Ok(true)
            }
            Err(_) => false,
        };
        line(&mut out, "<2> + <-2> glues to U", ok);
    }
    // (U^2, id) + (U^2, order-4 rotation) audits to the order-4 table row
    {
        let id_part = LatticeWithIsometry::identity(
            CatalogExpr::parse("U+U").unwrap().gram().unwrap(),
        );
        let rot = LatticeWithIsometry::new(
            CatalogExpr::parse("U+U").unwrap().gram().unwrap(),
            IntMatrix::from_i64(&[
                vec![0, 0, -1, 0],
                vec![0, 0, 0, -1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
            ]),
        )
        .unwrap();
        let ok = match equivariant_extension(&id_part, &rot, &GlueMap::trivial()) {
            Ok(glued) => {
                let rep = audit(&glued);
                let inv = symbol_from_lattice(&glued.kernel_phi(1).restricted_lattice());
                let coin = symbol_from_lattice(&glued.kernel_phi(4).restricted_lattice());
                rep.order == 4
                    && rep.all_ok()
                    && inv == Ok(GenusSymbol::unimodular(2, 2))
                    && coin == Ok(GenusSymbol::unimodular(2, 2))
            }
            Err(_) => false,
        };
        line(
            &mut out,
            "(U^2, id) + (U^2, rot4) audits to the order-4 row (II_(2,2), II_(2,2))",
            ok,
        );
    }
    // randomized determinant law: glue L against L(-1) along the full
    // diagonal anti-isometry
    {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let exprs = ["<2>", "<4>", "<6>", "<8>", "A2", "A3", "D4", "E6", "E7", "U+A2"];
        let mut ok = true;
        for _ in 0..count {
            let pick = exprs[(next() % exprs.len() as u64) as usize];
            let scale = 1 + (next() % 3) as i64;
            let e = CatalogExpr::parse(pick).unwrap();
            let s = e.gram().unwrap().rescale(scale);
            let t = s.rescale(-1);
            let ds = s.discriminant_form().unwrap();
            let k = ds.orders.len();
            let gens: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
                .collect();
            let glue = GlueMap::from_i64(&gens, &gens);
            match primitive_extension(&s, &t, &glue) {
                Ok(ext) => {
                    let lhs = ext.lattice.det() * &ext.glue_order * &ext.glue_order;
                    let rhs = s.det() * t.det();
                    if lhs.magnitude() != rhs.magnitude() {
                        ok = false;
                    }
                }
                Err(_) => ok = false,
            }
        }
        line(
            &mut out,
            &format!("determinant law det(L) |H|^2 = det(S) det(T) on {count} randomized glues"),
            ok,
        );
    }
    out
}
