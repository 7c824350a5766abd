//! `twk`: batch command-line interface for exact twisted K-theory
//! computations — fusion bases and tables, equivariant Adams operations,
//! nonequivariant coefficient and η-generator actions, and an invariant
//! verification suite.
//!
//! Output is deterministic: JSON objects use sorted keys and all listings are
//! sorted by weight.  Exit codes: 0 success, 1 usage error, 2 computation or
//! verification failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use twisted_k::adams::{adams_coefficient, adams_equivariant};
use twisted_k::intlin::{SparseEchelon, SparseVec};
use twisted_k::koszul::{
    adams_on_generators_with_lift, eta_basis, koszul_homology, lift_chain_map_bounded,
    KoszulContext,
};
use twisted_k::repring::weyl_dimension;
use twisted_k::rootsys::{Family, LieType, RootSystem, Weight};
use twisted_k::torus::TorusQuotient;
use twisted_k::verlinde::{c_invariant, fusion_multiply, level_weights, TwistedContext, VerlindeClass};

#[derive(Parser)]
#[command(
    name = "twk",
    version,
    about = "Exact Adams operations on twisted K-theory of compact Lie groups",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the fusion basis of a twisted context with dimensions.
    Basis(BasisArgs),
    /// Print the full fusion multiplication table.
    Fusion(FusionArgs),
    /// Apply the Adams operation psi^ell to basis classes.
    Adams(AdamsArgs),
    /// Nonequivariant data: coefficient orders and the eta-generator action.
    Nonequiv(NonequivArgs),
    /// Run the invariant suite for one (group, twist, ell) triple.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Group as family letter plus rank, e.g. A2, D4.
    #[arg(long)]
    group: String,
    /// Twist level n (nonzero).
    #[arg(long, allow_hyphen_values = true)]
    twist: i64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FusionArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct AdamsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Operation degree ell.
    #[arg(long, allow_hyphen_values = true)]
    ell: i64,
    /// Restrict to one or more basis weights (comma-separated labels).
    #[arg(long)]
    weight: Vec<String>,
}

#[derive(Args)]
struct NonequivArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Operation degree ell.
    #[arg(long, allow_hyphen_values = true)]
    ell: i64,
    /// Fix the chain-map solver's support bound instead of escalating.
    #[arg(long)]
    support_bound: Option<i64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Operation degree ell.
    #[arg(long, allow_hyphen_values = true)]
    ell: i64,
    /// Corrupt one fusion product before checking (negative-control hook).
    #[arg(long, hide = true)]
    corrupt_fusion: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

enum AppError {
    Usage(String),
    Compute(twisted_k::Error),
    VerifyFailed,
}

impl From<twisted_k::Error> for AppError {
    fn from(e: twisted_k::Error) -> Self {
        AppError::Compute(e)
    }
}

type AppResult<T> = Result<T, AppError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(AppError::VerifyFailed) => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> AppResult<()> {
    match cli.command {
        Command::Basis(a) => cmd_basis(a),
        Command::Fusion(a) => cmd_fusion(a),
        Command::Adams(a) => cmd_adams(a),
        Command::Nonequiv(a) => cmd_nonequiv(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn parse_context(common: &CommonArgs) -> AppResult<TwistedContext> {
    let t = LieType::parse(&common.group)
        .map_err(|e| AppError::Usage(format!("invalid group {:?}: {e}", common.group)))?;
    if common.twist == 0 {
        return Err(AppError::Usage("twist must be nonzero".into()));
    }
    Ok(TwistedContext::new(t, common.twist)?)
}

fn parse_weight(s: &str, rank: usize) -> AppResult<Weight> {
    let parts: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
    let w = parts.map_err(|_| AppError::Usage(format!("weight {s:?} is not a comma-separated integer list")))?;
    if w.len() != rank {
        return Err(AppError::Usage(format!(
            "weight {s:?} has {} labels, expected {rank}",
            w.len()
        )));
    }
    Ok(w)
}

fn emit(common: &CommonArgs, text: String) -> AppResult<()> {
    match &common.out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| AppError::Usage(format!("cannot create {}: {e}", path.display())))?;
            writeln!(f, "{text}")
                .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(())
        }
    }
}

fn weight_label(w: &[i64]) -> String {
    let inner: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("W({})", inner.join(","))
}

fn class_cell(a: &VerlindeClass) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (w, c) in a.terms() {
        let label = weight_label(w);
        let piece = if c == &BigInt::from(1) {
            label
        } else if c == &BigInt::from(-1) {
            format!("-{label}")
        } else {
            format!("{c}{label}")
        };
        parts.push(piece);
    }
    let mut s = parts.join("+");
    s = s.replace("+-", "-");
    s
}

fn big_to_json(x: &BigInt) -> AppResult<Value> {
    let v = x
        .to_i64()
        .ok_or_else(|| AppError::Compute(twisted_k::Error::Unsupported(
            "value exceeds JSON integer range".into(),
        )))?;
    Ok(json!(v))
}

fn zero_theory_note(rs: &RootSystem) -> String {
    format!(
        "the twisted theory vanishes: 0 < |twist| < dual Coxeter number {}",
        rs.dual_coxeter
    )
}

fn cmd_basis(args: BasisArgs) -> AppResult<()> {
    let ctx = parse_context(&args.common)?;
    let rs = ctx.rs();
    let weights = level_weights(&ctx);
    let zero = weights.is_empty();
    let text = match args.common.format {
        Format::Json => {
            let mut rows = Vec::new();
            for w in &weights {
                rows.push(json!({
                    "dimension": big_to_json(&weyl_dimension(rs, w)?)?,
                    "weight": w,
                }));
            }
            let mut obj = json!({
                "basis": rows,
                "group": ctx.lie_type().to_string(),
                "level": ctx.level(),
                "twist": ctx.twist(),
                "zero_theory": zero,
            });
            if zero {
                obj["note"] = json!(zero_theory_note(rs));
            }
            serde_json::to_string_pretty(&obj).expect("serializable")
        }
        Format::Csv => {
            return Err(AppError::Usage("csv output is only available for 2-dimensional tables (fusion)".into()));
        }
        Format::Pretty => {
            let mut lines = vec![format!(
                "fusion basis of {} at twist {} (level {})",
                ctx.lie_type(),
                ctx.twist(),
                ctx.level()
            )];
            if zero {
                lines.push(zero_theory_note(rs));
            }
            for w in &weights {
                lines.push(format!("  {}  dim {}", weight_label(w), weyl_dimension(rs, w)?));
            }
            lines.join("\n")
        }
    };
    emit(&args.common, text)
}

fn fusion_table(ctx: &TwistedContext) -> AppResult<Vec<(Weight, Weight, VerlindeClass)>> {
    let weights = level_weights(ctx);
    let mut rows = Vec::new();
    for a in &weights {
        let wa = VerlindeClass::basis(ctx, a)?;
        for b in &weights {
            let wb = VerlindeClass::basis(ctx, b)?;
            rows.push((a.clone(), b.clone(), fusion_multiply(&wa, &wb)?));
        }
    }
    Ok(rows)
}

fn cmd_fusion(args: FusionArgs) -> AppResult<()> {
    let ctx = parse_context(&args.common)?;
    let weights = level_weights(&ctx);
    let table = fusion_table(&ctx)?;
    let text = match args.common.format {
        Format::Json => {
            let mut rows = Vec::new();
            for (a, b, prod) in &table {
                rows.push(json!({
                    "left": a,
                    "product": prod.to_json()?["terms"],
                    "right": b,
                }));
            }
            let obj = json!({
                "basis": weights,
                "group": ctx.lie_type().to_string(),
                "level": ctx.level(),
                "table": rows,
                "twist": ctx.twist(),
            });
            serde_json::to_string_pretty(&obj).expect("serializable")
        }
        Format::Csv => {
            let mut lines = Vec::new();
            let header: Vec<String> =
                std::iter::once(String::new()).chain(weights.iter().map(|w| weight_label(w))).collect();
            lines.push(header.join(","));
            let cells: BTreeMap<(Weight, Weight), String> =
                table.iter().map(|(a, b, p)| ((a.clone(), b.clone()), class_cell(p))).collect();
            for a in &weights {
                let mut row = vec![weight_label(a)];
                for b in &weights {
                    row.push(format!("\"{}\"", cells[&(a.clone(), b.clone())]));
                }
                lines.push(row.join(","));
            }
            lines.join("\n")
        }
        Format::Pretty => {
            let mut lines = vec![format!(
                "fusion table of {} at twist {} (level {})",
                ctx.lie_type(),
                ctx.twist(),
                ctx.level()
            )];
            for (a, b, p) in &table {
                lines.push(format!("  {} * {} = {}", weight_label(a), weight_label(b), class_cell(p)));
            }
            lines.join("\n")
        }
    };
    emit(&args.common, text)
}

fn cmd_adams(args: AdamsArgs) -> AppResult<()> {
    let ctx = parse_context(&args.common)?;
    let sources: Vec<Weight> = if args.weight.is_empty() {
        level_weights(&ctx)
    } else {
        let mut v = Vec::new();
        for s in &args.weight {
            let w = parse_weight(s, ctx.rs().rank())?;
            if VerlindeClass::basis(&ctx, &w).is_err() {
                return Err(AppError::Usage(format!(
                    "weight {s:?} is not in the level-{} fusion basis",
                    ctx.level()
                )));
            }
            v.push(w);
        }
        v
    };
    let ell = args.ell;
    let mut images = Vec::new();
    for w in &sources {
        let img = adams_equivariant(&ctx, ell, &VerlindeClass::basis(&ctx, w)?)?;
        images.push((w.clone(), img));
    }
    let text = match args.common.format {
        Format::Json => {
            let mut rows = Vec::new();
            for (w, img) in &images {
                rows.push(json!({
                    "image": img.to_json()?["terms"],
                    "source": w,
                }));
            }
            let mut obj = json!({
                "ell": ell,
                "from_twist": ctx.twist(),
                "group": ctx.lie_type().to_string(),
                "images": rows,
                "to_twist": ell * ctx.twist(),
            });
            if ell == 0 {
                obj["note"] = json!("psi^0 is the zero map");
            }
            serde_json::to_string_pretty(&obj).expect("serializable")
        }
        Format::Csv => {
            return Err(AppError::Usage("csv output is only available for 2-dimensional tables (fusion)".into()));
        }
        Format::Pretty => {
            let mut lines = vec![format!(
                "psi^{ell} on {} classes: twist {} -> twist {}",
                ctx.lie_type(),
                ctx.twist(),
                ell * ctx.twist()
            )];
            if ell == 0 {
                lines.push("psi^0 is the zero map".into());
            }
            for (w, img) in &images {
                lines.push(format!("  {} -> {}", weight_label(w), class_cell(img)));
            }
            lines.join("\n")
        }
    };
    emit(&args.common, text)
}

fn cmd_nonequiv(args: NonequivArgs) -> AppResult<()> {
    let ctx = parse_context(&args.common)?;
    let rs = ctx.rs();
    let ell = args.ell;
    if args.common.format == Format::Csv {
        return Err(AppError::Usage("csv output is only available for 2-dimensional tables (fusion)".into()));
    }
    if ctx.level() < 0 {
        let obj = json!({
            "ell": ell,
            "group": ctx.lie_type().to_string(),
            "note": zero_theory_note(rs),
            "twist": ctx.twist(),
            "zero_theory": true,
        });
        let text = match args.common.format {
            Format::Json => serde_json::to_string_pretty(&obj).expect("serializable"),
            _ => format!(
                "{} at twist {}: {}",
                ctx.lie_type(),
                ctx.twist(),
                zero_theory_note(rs)
            ),
        };
        return emit(&args.common, text);
    }
    let c_source = c_invariant(&ctx)?;
    let (coeff_value, coeff_modulus) = adams_coefficient(rs, ctx.twist(), ell, &BigInt::from(1))?;
    let c_target = coeff_modulus.clone();
    // The eta-generator pipeline needs a nonzero target twist and rank >= 2.
    let mut eta = Value::Null;
    let mut eta_note = Value::Null;
    if ell == 0 {
        eta_note = json!("psi^0 is the zero map; the eta action collapses");
    } else if rs.rank() < 2 {
        eta_note = json!("rank 1 has no exterior generators (coefficient group only)");
    } else {
        let src = KoszulContext::new(ctx)?;
        let dst = KoszulContext::new(TwistedContext::new(ctx.lie_type(), ell * ctx.twist())?)?;
        let lift = lift_chain_map_bounded(&src, &dst, ell, args.support_bound)?;
        let map = adams_on_generators_with_lift(&src, &dst, &lift)?;
        let source_basis: Vec<Vec<Value>> = eta_basis(&src)?
            .kernel_basis
            .iter()
            .map(|v| v.iter().map(big_to_json).collect::<AppResult<_>>())
            .collect::<AppResult<_>>()?;
        let target_basis: Vec<Vec<Value>> = eta_basis(&dst)?
            .kernel_basis
            .iter()
            .map(|v| v.iter().map(big_to_json).collect::<AppResult<_>>())
            .collect::<AppResult<_>>()?;
        let images: Vec<Vec<Value>> = map
            .images
            .iter()
            .map(|v| v.iter().map(big_to_json).collect::<AppResult<_>>())
            .collect::<AppResult<_>>()?;
        eta = json!({
            "images": images,
            "modulus": big_to_json(&map.modulus)?,
            "source_basis": source_basis,
            "target_basis": target_basis,
        });
    }
    let obj = json!({
        "c_source": big_to_json(&c_source)?,
        "c_target": match &c_target { Some(c) => big_to_json(c)?, None => Value::Null },
        "coefficient": {
            "modulus": match &c_target { Some(c) => big_to_json(c)?, None => Value::Null },
            "value": big_to_json(&coeff_value)?,
        },
        "ell": ell,
        "eta": eta,
        "eta_note": eta_note,
        "group": ctx.lie_type().to_string(),
        "twist": ctx.twist(),
        "zero_theory": false,
    });
    let text = match args.common.format {
        Format::Json => serde_json::to_string_pretty(&obj).expect("serializable"),
        _ => {
            let mut lines = vec![format!(
                "{} twist {} ell {}: c(source) = {}, coefficient map k -> {}{}",
                ctx.lie_type(),
                ctx.twist(),
                ell,
                c_source,
                coeff_value,
                match &c_target {
                    Some(c) => format!("k mod {c}"),
                    None => " (zero map)".into(),
                }
            )];
            if let Value::Object(map) = &obj["eta"] {
                lines.push(format!(
                    "eta action: images {} mod {}",
                    map["images"], map["modulus"]
                ));
            } else if let Value::String(s) = &obj["eta_note"] {
                lines.push(s.clone());
            }
            lines.join("\n")
        }
    };
    emit(&args.common, text)
}

struct CheckOutcome {
    name: &'static str,
    witness: Option<String>,
}

fn check_fusion_table(ctx: &TwistedContext, corrupt: bool) -> AppResult<CheckOutcome> {
    let weights = level_weights(ctx);
    let mut witness = None;
    'outer: for a in &weights {
        let wa = VerlindeClass::basis(ctx, a)?;
        for b in &weights {
            let wb = VerlindeClass::basis(ctx, b)?;
            let mut prod = fusion_multiply(&wa, &wb)?;
            if corrupt && witness.is_none() && !prod.is_zero() {
                // Negative-control hook: damage the first computed product.
                let (w, _) = prod.terms().iter().next().map(|(w, c)| (w.clone(), c.clone())).expect("nonzero");
                prod.add_term(w, BigInt::from(1));
            }
            for (w, c) in prod.terms() {
                if c < &BigInt::from(0) {
                    witness = Some(format!(
                        "{} * {} has negative coefficient {c} at {}",
                        weight_label(a),
                        weight_label(b),
                        weight_label(w)
                    ));
                    break 'outer;
                }
            }
            if a == &vec![0i64; a.len()] && prod.terms() != wb.terms() {
                witness = Some(format!(
                    "unit row: {} * {} = {} instead of {}",
                    weight_label(a),
                    weight_label(b),
                    class_cell(&prod),
                    weight_label(b)
                ));
                break 'outer;
            }
        }
    }
    Ok(CheckOutcome { name: "fusion table nonnegative with unit row", witness })
}

fn check_restriction_injective(ctx: &TwistedContext) -> AppResult<CheckOutcome> {
    let q = TorusQuotient::new(*ctx);
    let weights = level_weights(ctx);
    let mut ech: SparseEchelon<Weight, usize> = SparseEchelon::new();
    for (i, mu) in weights.iter().enumerate() {
        let r = q.restrict(&VerlindeClass::basis(ctx, mu)?)?;
        ech.insert(SparseVec::column(r.terms().clone(), i));
    }
    let witness = if ech.pivot_count() == weights.len() {
        None
    } else {
        Some(format!(
            "restricted basis spans rank {} < {}",
            ech.pivot_count(),
            weights.len()
        ))
    };
    Ok(CheckOutcome { name: "restriction injective on the basis", witness })
}

fn check_adams_naturality(ctx: &TwistedContext, ell: i64) -> AppResult<CheckOutcome> {
    let name = "adams naturality through the torus";
    let mut witness = None;
    if ell == 0 {
        for mu in level_weights(ctx) {
            let img = adams_equivariant(ctx, 0, &VerlindeClass::basis(ctx, &mu)?)?;
            if !img.is_zero() {
                witness = Some(format!("psi^0({}) is nonzero", weight_label(&mu)));
                break;
            }
        }
        return Ok(CheckOutcome { name, witness });
    }
    let q = TorusQuotient::new(*ctx);
    let target = TwistedContext::new(ctx.lie_type(), ell * ctx.twist())?;
    let qt = TorusQuotient::new(target);
    for mu in level_weights(ctx) {
        let a = VerlindeClass::basis(ctx, &mu)?;
        let (_, via_torus) = q.adams(ell, &q.restrict(&a)?)?;
        let via_group = qt.restrict(&adams_equivariant(ctx, ell, &a)?)?;
        if via_torus != via_group {
            witness = Some(format!("naturality fails at {}", weight_label(&mu)));
            break;
        }
    }
    Ok(CheckOutcome { name, witness })
}

fn check_adams_composition(ctx: &TwistedContext, ell: i64) -> AppResult<CheckOutcome> {
    let name = "adams composition with psi^-1";
    let mut witness = None;
    if ell == 0 {
        return Ok(CheckOutcome { name, witness });
    }
    let mid = TwistedContext::new(ctx.lie_type(), -ctx.twist())?;
    for mu in level_weights(ctx) {
        let a = VerlindeClass::basis(ctx, &mu)?;
        let lhs = adams_equivariant(&mid, ell, &adams_equivariant(ctx, -1, &a)?)?;
        let rhs = adams_equivariant(ctx, -ell, &a)?;
        if lhs != rhs {
            witness = Some(format!(
                "psi^{ell} after psi^-1 differs from psi^{} at {}",
                -ell,
                weight_label(&mu)
            ));
            break;
        }
    }
    Ok(CheckOutcome { name, witness })
}

fn check_homology_orders(ctx: &TwistedContext) -> AppResult<CheckOutcome> {
    let name = "koszul homology orders";
    let kctx = KoszulContext::new(*ctx)?;
    let dims: Vec<i64> = kctx
        .dims()
        .iter()
        .map(|d| d.to_i64().expect("desk-scale dimensions"))
        .collect();
    let h = koszul_homology(&dims);
    let witness = if &h.coefficient_order == kctx.coefficient_order() {
        None
    } else {
        Some(format!(
            "homology coefficient order {} differs from gcd {}",
            h.coefficient_order,
            kctx.coefficient_order()
        ))
    };
    Ok(CheckOutcome { name, witness })
}

fn cmd_verify(args: VerifyArgs) -> AppResult<()> {
    let ctx = parse_context(&args.common)?;
    if args.common.format == Format::Csv {
        return Err(AppError::Usage("csv output is only available for 2-dimensional tables (fusion)".into()));
    }
    let mut outcomes = vec![
        check_fusion_table(&ctx, args.corrupt_fusion)?,
        check_restriction_injective(&ctx)?,
        check_adams_naturality(&ctx, args.ell)?,
        check_adams_composition(&ctx, args.ell)?,
    ];
    if ctx.lie_type().family() == Family::A && ctx.level() >= 0 {
        outcomes.push(check_homology_orders(&ctx)?);
    }
    let all_pass = outcomes.iter().all(|o| o.witness.is_none());
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| match &o.witness {
            None => json!({"name": o.name, "status": "pass"}),
            Some(w) => json!({"name": o.name, "status": "fail", "witness": w}),
        })
        .collect();
    let obj = json!({
        "checks": checks,
        "ell": args.ell,
        "group": ctx.lie_type().to_string(),
        "status": if all_pass { "pass" } else { "fail" },
        "twist": ctx.twist(),
    });
    let text = match args.common.format {
        Format::Json => serde_json::to_string_pretty(&obj).expect("serializable"),
        _ => {
            let mut lines = Vec::new();
            for o in &outcomes {
                match &o.witness {
                    None => lines.push(format!("pass  {}", o.name)),
                    Some(w) => lines.push(format!("FAIL  {} — {w}", o.name)),
                }
            }
            lines.join("\n")
        }
    };
    emit(&args.common, text)?;
    if all_pass {
        Ok(())
    } else {
        Err(AppError::VerifyFailed)
    }
}
