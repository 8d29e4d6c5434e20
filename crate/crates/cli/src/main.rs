//! Command-line front end: classify second homology data, check the
//! necessary conditions, decide existence, construct and verify
//! certificates, and sweep an atlas of small torsion groups.
//!
//! Exit codes: 0 for a definitive answer, 2 for Unknown, 1 for input
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sasakian::abelian::{
    barden_normal_form, gk_check, kollar_obstruction, tstar_check, Barden, H2Data,
};
use sasakian::construct::{construct_regular, regular_diffeo_name};
use sasakian::decide::{
    decide_negative_sasakian, decide_sasakian, decide_semiregular_sphere,
    kcontact_sphere_necessary, positive_table_member, Decision, Verdict,
};
use sasakian::seifert::SeifertCertificate;

/// Environment variable that redirects emitted files.
const OUTPUT_DIR_ENV: &str = "SASAKIAN_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "sasakian", version, about = "Decision engine for Sasakian structures on simply connected 5-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct H2Args {
    /// Rank of the free part of H2.
    #[arg(long, default_value_t = 0)]
    rank: u32,
    /// Torsion as comma-separated m^count summands, e.g. "5^2,7^6".
    #[arg(long, default_value = "")]
    torsion: String,
    /// Barden invariant: 0, inf, or a positive integer.
    #[arg(long = "i", default_value = "0")]
    barden: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Barden normal form(s) of the given H2 data.
    Classify(H2Args),
    /// Report each necessary condition separately.
    Check(H2Args),
    /// Decide existence of a Sasakian structure.
    Decide {
        #[command(flatten)]
        h2: H2Args,
        /// Write the certificate (when the answer is yes) to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Construct a certificate for the given H2 data and print it.
    Construct {
        #[command(flatten)]
        h2: H2Args,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Verify a certificate file and report the invariants it certifies.
    Verify { file: PathBuf },
    /// Decide existence of a negative structure on a rational homology sphere.
    Negative {
        /// Torsion as comma-separated m^count summands.
        #[arg(long, default_value = "")]
        torsion: String,
    },
    /// Check the K-contact necessary condition at rank 0.
    Kcontact {
        #[arg(long, default_value = "")]
        torsion: String,
    },
    /// Construct the torsion-free (regular) example of a given rank.
    Regular {
        #[arg(long, default_value_t = 0)]
        rank: u32,
        /// Build the non-spin example instead of the spin one.
        #[arg(long)]
        non_spin: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Sweep small rank-0 torsion groups and tabulate the verdicts.
    Atlas {
        /// Largest prime-power summand order.
        #[arg(long, default_value_t = 20)]
        max_order: u64,
        /// Largest summand count.
        #[arg(long, default_value_t = 12)]
        max_count: u64,
        /// Most summand kinds per group.
        #[arg(long, default_value_t = 3)]
        max_parts: usize,
    },
}

fn parse_torsion(s: &str) -> Result<Vec<(u64, u64)>, String> {
    let mut out = Vec::new();
    for piece in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (m, c) = piece
            .split_once('^')
            .ok_or_else(|| format!("torsion summand '{piece}' is not of the form m^count"))?;
        let m: u64 = m.parse().map_err(|_| format!("bad order '{m}'"))?;
        let c: u64 = c.parse().map_err(|_| format!("bad count '{c}'"))?;
        out.push((m, c));
    }
    Ok(out)
}

fn parse_barden(s: &str) -> Result<Barden, String> {
    match s {
        "inf" => Ok(Barden::Infinity),
        other => other
            .parse::<u32>()
            .map(Barden::Finite)
            .map_err(|_| format!("Barden invariant '{other}' is not 0, inf, or a number")),
    }
}

fn parse_h2(args: &H2Args) -> Result<H2Data, String> {
    let torsion = parse_torsion(&args.torsion)?;
    let barden = parse_barden(&args.barden)?;
    H2Data::new(args.rank, &torsion, barden).map_err(|e| e.to_string())
}

fn torsion_string(h: &H2Data) -> String {
    if h.torsion.is_empty() {
        "none".into()
    } else {
        h.torsion
            .iter()
            .map(|t| format!("{}^{}", t.order, t.count))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn output_path(requested: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if requested.is_relative() => PathBuf::from(dir).join(requested),
        _ => requested.to_path_buf(),
    }
}

fn emit_certificate(cert: &SeifertCertificate, target: &Path) -> Result<(), String> {
    let path = output_path(target);
    std::fs::write(&path, cert.to_text())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    println!("CERTIFICATE_FILE: {}", path.display());
    Ok(())
}

fn print_decision(d: &Decision, emit: Option<&Path>) -> Result<ExitCode, String> {
    for line in &d.trace {
        println!("TRACE: {line}");
    }
    match &d.verdict {
        Verdict::Yes(cert) => {
            println!("VERDICT: yes");
            if let Some(path) = emit {
                emit_certificate(cert, path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Verdict::No(o) => {
            println!("VERDICT: no");
            println!("OBSTRUCTION: {o}");
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Unknown(reason) => {
            println!("VERDICT: unknown");
            println!("REASON: {reason}");
            Ok(ExitCode::from(2))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Classify(args) => {
            let h = parse_h2(&args)?;
            println!("RANK: {}", h.rank);
            println!("TORSION: {}", torsion_string(&h));
            println!("BARDEN: {}", h.barden);
            match barden_normal_form(&h) {
                Ok(names) => {
                    for name in names {
                        println!("NORMAL_FORM: {name}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("NOT_REALIZABLE: {e}");
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Check(args) => {
            let h = parse_h2(&args)?;
            match gk_check(&h) {
                Ok(()) => println!("GK: pass"),
                Err(c) => println!("GK: fail ({c})"),
            }
            if h.rank == 0 {
                match kollar_obstruction(&h).map_err(|e| e.to_string())? {
                    Ok(()) => println!("KOLLAR: pass"),
                    Err(parts) => println!("KOLLAR: fail ({} offending parts)", parts.len()),
                }
                match tstar_check(&h).map_err(|e| e.to_string())? {
                    Ok(()) => println!("TSTAR: pass"),
                    Err(w) => println!("TSTAR: fail ({} offending parts)", w.len()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide { h2, emit } => {
            let h = parse_h2(&h2)?;
            print_decision(&decide_sasakian(&h), emit.as_deref())
        }
        Command::Construct { h2, emit } => {
            let h = parse_h2(&h2)?;
            let d = decide_sasakian(&h);
            match &d.verdict {
                Verdict::Yes(cert) => {
                    print!("{}", cert.to_text());
                    if let Some(path) = emit {
                        emit_certificate(cert, &path)?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                _ => print_decision(&d, None),
            }
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let cert = SeifertCertificate::from_text(&text).map_err(|e| e.to_string())?;
            match cert.validate() {
                Ok(()) => println!("VALID: true"),
                Err(violations) => {
                    println!("VALID: false");
                    for v in violations {
                        println!("VIOLATION: {v}");
                    }
                    return Ok(ExitCode::SUCCESS);
                }
            }
            match cert.invariants() {
                Ok(inv) => {
                    println!("H1_ZERO: {}", inv.h1_zero);
                    println!("KAHLER_POSITIVE: {}", cert.kahler_positive().map_err(|e| e.to_string())?);
                    println!("RANK: {}", inv.h2.rank);
                    println!("TORSION: {}", torsion_string(&inv.h2));
                    println!("SPIN: {}", inv.spin);
                    println!("BARDEN: {}", inv.h2.barden);
                    println!("SIMPLY_CONNECTED: {}", inv.simply_connected());
                }
                Err(e) => println!("INVARIANTS_UNAVAILABLE: {e}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Negative { torsion } => {
            let torsion = parse_torsion(&torsion)?;
            let h = H2Data::new(0, &torsion, Barden::ZERO).map_err(|e| e.to_string())?;
            println!("POSITIVE_TABLE_MEMBER: {}", positive_table_member(&h));
            let d = decide_negative_sasakian(&h).map_err(|e| e.to_string())?;
            print_decision(&d, None)
        }
        Command::Kcontact { torsion } => {
            let torsion = parse_torsion(&torsion)?;
            let h = H2Data::new(0, &torsion, Barden::ZERO).map_err(|e| e.to_string())?;
            let r = kcontact_sphere_necessary(&h).map_err(|e| e.to_string())?;
            for (p, e, c, d) in &r.parts {
                let d = d.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                println!("PART: p={p} e={e} count={c} degree={d}");
            }
            println!("DEGREE_BRANCH: {}", r.degree_branch);
            println!("SHIFTED_BRANCH: {}", r.shifted_branch);
            println!("NECESSARY_CONDITION: {}", if r.passes() { "pass" } else { "fail" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Regular { rank, non_spin, emit } => {
            let spin = !non_spin;
            let cert = construct_regular(rank, spin).map_err(|e| e.to_string())?;
            let name = regular_diffeo_name(rank, spin).map_err(|e| e.to_string())?;
            println!("NORMAL_FORM: {name}");
            print!("{}", cert.to_text());
            if let Some(path) = emit {
                emit_certificate(&cert, &path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Atlas { max_order, max_count, max_parts } => {
            let orders: Vec<u64> = (2..=max_order).filter(|&m| is_prime_power(m)).collect();
            let mut yes = 0usize;
            let mut no = 0usize;
            let mut unknown = 0usize;
            let mut stack: Vec<(u64, u64)> = Vec::new();
            sweep(&orders, max_count, max_parts, 0, &mut stack, &mut |group| {
                let h = H2Data::new(0, group, Barden::ZERO).expect("orders >= 2");
                let d = decide_semiregular_sphere(&h).expect("rank 0");
                let label = match d.verdict {
                    Verdict::Yes(_) => {
                        yes += 1;
                        "yes"
                    }
                    Verdict::No(_) => {
                        no += 1;
                        "no"
                    }
                    Verdict::Unknown(_) => {
                        unknown += 1;
                        "unknown"
                    }
                };
                let name = group
                    .iter()
                    .map(|(m, c)| format!("{m}^{c}"))
                    .collect::<Vec<_>>()
                    .join(",");
                println!("ATLAS: {name} semiregular={label}");
            });
            println!("SUMMARY: yes={yes} no={no} unknown={unknown}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn is_prime_power(m: u64) -> bool {
    let mut n = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true
}

/// Enumerates groups as increasing sequences of prime-power orders with
/// even counts, up to the given size, invoking the callback on each.
fn sweep(
    orders: &[u64],
    max_count: u64,
    max_parts: usize,
    from: usize,
    stack: &mut Vec<(u64, u64)>,
    f: &mut impl FnMut(&[(u64, u64)]),
) {
    if !stack.is_empty() {
        f(stack);
    }
    if stack.len() == max_parts {
        return;
    }
    for i in from..orders.len() {
        let mut c = 2;
        while c <= max_count {
            stack.push((orders[i], c));
            sweep(orders, max_count, max_parts, i + 1, stack, f);
            stack.pop();
            c += 2;
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
