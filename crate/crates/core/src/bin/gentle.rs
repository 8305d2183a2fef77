use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::json;

use gentle::corpus::{gen_corpus, CorpusSpec};
use gentle::curves::{
    classify_word, dehn_twist, graded, parse_word, tau_translate_dir, word_to_text, CurveWord, GradedCurve,
    SlideDirection,
};
use gentle::field::FieldChoice;
use gentle::homalg::{mapping_cone, stalk_probes, Oracle};
use gentle::objects::{check_dsquared, curve_complex, string_complex};
use gentle::presentation::{parse_presentation, validate_gentle, GentlePresentation};
use gentle::selftest;
use gentle::surface::{build_disc_model, decide_with_witness, ribbon_surface, DiscModel};
use gentle::tilting::{endo_presentation, parse_arc_system, roundtrip_check, ArcSystem};

#[derive(Parser)]
#[command(name = "gentle", version, about = "Marked surfaces and derived categories of gentle algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Graphviz output where available.
    #[arg(long, global = true)]
    dot: bool,
    #[arg(long, global = true, value_enum, default_value_t = Field::Prime)]
    field: Field,
    /// Stalk shifts used as extra probes when comparing fingerprints.
    #[arg(long, global = true, default_value_t = 0)]
    probe_window: i64,
    #[arg(long, global = true, default_value_t = 0x9e11e)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Prime,
    Rational,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the gentle axioms.
    Validate { file: PathBuf },
    /// Disc model, boundary components and winding numbers.
    Surface { file: PathBuf },
    /// Genus and (marked points, winding) per boundary component.
    Invariant { file: PathBuf },
    /// Decide derived equivalence of two presentations.
    Equiv { left: PathBuf, right: PathBuf },
    /// Complex of a curve word.
    Complex {
        file: PathBuf,
        word: String,
        /// Degree of the first crossing.
        #[arg(long, default_value_t = 0)]
        degree: i64,
    },
    /// Hom profile between two curve words, with the combinatorial basis count.
    Hom { file: PathBuf, x: String, y: String },
    /// Cone of the morphism of two arcs meeting at a marked point, against
    /// the resolved arc.
    Cone {
        file: PathBuf,
        x: String,
        y: String,
        /// Disc whose marked point is shared; the first shared one by default.
        #[arg(long)]
        disc: Option<usize>,
    },
    /// Auslander-Reiten translate of a word.
    Tau {
        file: PathBuf,
        word: String,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Inverse translate.
        #[arg(long)]
        inverse: bool,
    },
    /// Dehn twist of an arc along a band, against the spherical twist.
    Twist { file: PathBuf, band: String, arc: String },
    /// Endomorphism presentation of an arc system, the dual arcs by default.
    Endo {
        file: PathBuf,
        #[arg(long)]
        arcs: Option<PathBuf>,
    },
    /// Seeded random gentle presentations.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 10)]
        max_arrows: usize,
        /// Write one file per presentation here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

enum Failure {
    Validation(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Validation(e.to_string())
}

type Out = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Validation(m) | Failure::Internal(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn load(path: &FsPath) -> Result<GentlePresentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let p = parse_presentation(&text).map_err(invalid)?;
    let report = validate_gentle(&p);
    if !report.is_ok() {
        let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Validation(lines.join("\n")));
    }
    Ok(p)
}

fn loaded(path: &FsPath) -> Result<(GentlePresentation, DiscModel), Failure> {
    let p = load(path)?;
    let m = build_disc_model(&p).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok((p, m))
}

fn word(
    p: &GentlePresentation,
    m: &DiscModel,
    text: &str,
    degree: i64,
) -> Result<(GradedCurve, Rational64), Failure> {
    let (w, lambda) = parse_word(p, m, text).map_err(invalid)?;
    let g = graded(m, w, degree).map_err(invalid)?;
    Ok((g, lambda.unwrap_or_else(|| Rational64::from_integer(1))))
}

fn oracle<'a>(cli: &Cli, p: &'a GentlePresentation) -> Oracle<'a> {
    let field = match cli.field {
        Field::Prime => FieldChoice::Prime,
        Field::Rational => FieldChoice::Rational,
    };
    Oracle::with_field(p, field)
}

fn emit(cli: &Cli, value: serde_json::Value, text: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        println!("{}", text());
    }
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Validate { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Failure::Validation(format!("{}: {e}", file.display())))?;
            let p = parse_presentation(&text).map_err(invalid)?;
            let report = validate_gentle(&p);
            emit(cli, json!({ "ok": report.is_ok(), "violations": report.violations }), || {
                if report.is_ok() {
                    "gentle".into()
                } else {
                    report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n")
                }
            });
            if report.is_ok() {
                Ok(())
            } else {
                Err(Failure::Validation("presentation is not gentle".into()))
            }
        }
        Cmd::Surface { file } => {
            let (p, m) = loaded(file)?;
            let s = ribbon_surface(&p).map_err(|e| Failure::Internal(e.to_string()))?;
            if cli.dot {
                println!("{}", m.to_dot(&p));
                return Ok(());
            }
            emit(cli, s.report_json(), || {
                let mut out = format!(
                    "euler characteristic {}\ngenus {}\n{} boundary components",
                    s.euler_characteristic,
                    s.genus,
                    s.boundary.len()
                );
                for b in &s.boundary {
                    out.push_str(&format!("\n  marked {} winding {}", b.marked_count, b.winding));
                }
                out
            });
            Ok(())
        }
        Cmd::Invariant { file } => {
            let p = load(file)?;
            let s = ribbon_surface(&p).map_err(|e| Failure::Internal(e.to_string()))?;
            let inv = s.invariant();
            emit(
                cli,
                json!({
                    "genus": inv.genus,
                    "components": inv.components.iter()
                        .map(|(m, w)| json!({ "marked": m, "winding": w }))
                        .collect::<Vec<_>>(),
                }),
                || format!("genus {} components {:?}", inv.genus, inv.components),
            );
            Ok(())
        }
        Cmd::Equiv { left, right } => {
            let (p, q) = (load(left)?, load(right)?);
            let (verdict, witness) = decide_with_witness(&p, &q).map_err(|e| Failure::Internal(e.to_string()))?;
            emit(cli, json!({ "verdict": verdict, "witness": witness }), || match &witness {
                Some(w) => format!("{verdict}\n{w:?}"),
                None => verdict.to_string(),
            });
            Ok(())
        }
        Cmd::Complex { file, word: text, degree } => {
            let (p, m) = loaded(file)?;
            let (g, lambda) = word(&p, &m, text, *degree)?;
            let x = curve_complex(&p, &m, &g, lambda).map_err(invalid)?;
            check_dsquared(&p, &x).map_err(|w| Failure::Internal(format!("d² does not vanish: {w:?}")))?;
            let class = classify_word(&p, &m, &g.word);
            emit(
                cli,
                json!({ "complex": x.to_json(&p), "degrees": g.grading.degrees, "class": class.to_string() }),
                || format!("{}class {class}", x.to_text(&p)),
            );
            Ok(())
        }
        Cmd::Hom { file, x, y } => {
            let (p, m) = loaded(file)?;
            let (gx, lx) = word(&p, &m, x, 0)?;
            let (gy, ly) = word(&p, &m, y, 0)?;
            let cx = curve_complex(&p, &m, &gx, lx).map_err(invalid)?;
            let cy = curve_complex(&p, &m, &gy, ly).map_err(invalid)?;
            let o = oracle(cli, &p);
            let prof = o.hom_profile(&cx, &cy);
            let basis = o.alp_basis_all(&cx, &cy);
            let counts: std::collections::BTreeMap<i64, usize> =
                basis.iter().map(|(d, v)| (*d, v.len())).filter(|(_, n)| *n > 0).collect();
            emit(cli, json!({ "profile": prof.dims, "basis": counts }), || {
                prof.dims
                    .iter()
                    .map(|(d, n)| format!("degree {d}: {n} (basis {})", counts.get(d).copied().unwrap_or(0)))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            if counts != prof.dims {
                return Err(Failure::Internal("combinatorial basis disagrees with the oracle".into()));
            }
            Ok(())
        }
        Cmd::Cone { file, x, y, disc } => {
            let (p, m) = loaded(file)?;
            let (a, _) = word(&p, &m, x, 0)?;
            let (b, _) = word(&p, &m, y, 0)?;
            let ends = |w: &CurveWord| [w.start_disc(), w.end_disc(&m)];
            let disc = match disc {
                Some(d) => *d,
                None => *ends(&a.word)
                    .iter()
                    .find(|d| ends(&b.word).contains(d))
                    .ok_or_else(|| invalid("the arcs share no marked point"))?,
            };
            let orient = |g: &GradedCurve| if g.word.start_disc() == disc { g.clone() } else { g.reversed(&m) };
            let (a, b) = (orient(&a), orient(&b));
            let b = b.shifted(a.grading.degrees[0] - b.grading.degrees[0]);
            let o = oracle(cli, &p);
            let (f, resolved) = o.intersection_morphism(&m, &a, &b, disc).map_err(invalid)?;
            let cone = mapping_cone(&f).map_err(|e| Failure::Internal(e.to_string()))?;
            let z = string_complex(&p, &m, &resolved).map_err(|e| Failure::Internal(e.to_string()))?;
            let agree = o.same_fingerprint(&cone, &z, cli.probe_window);
            let text = word_to_text(&p, &m, &resolved.word, None);
            emit(
                cli,
                json!({ "resolved": text, "degrees": resolved.grading.degrees, "cone": cone.to_json(&p), "agree": agree }),
                || format!("resolved {text}\ncone\n{}fingerprints agree: {agree}", cone.to_text(&p)),
            );
            if agree {
                Ok(())
            } else {
                Err(Failure::Internal("cone and resolution differ".into()))
            }
        }
        Cmd::Tau { file, word: text, power, inverse } => {
            let (p, m) = loaded(file)?;
            let (mut g, lambda) = word(&p, &m, text, 0)?;
            let dir = if *inverse { SlideDirection::Forward } else { SlideDirection::Backward };
            let mut steps = Vec::new();
            for _ in 0..*power {
                g = tau_translate_dir(&m, &g, dir).map_err(invalid)?;
                steps.push(json!({
                    "word": word_to_text(&p, &m, &g.word, g.word.is_band().then_some(&lambda)),
                    "degrees": g.grading.degrees,
                }));
            }
            emit(cli, json!(steps), || {
                steps
                    .iter()
                    .map(|s| format!("{} {}", s["word"].as_str().unwrap(), s["degrees"]))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(())
        }
        Cmd::Twist { file, band, arc } => {
            let (p, m) = loaded(file)?;
            let (gb, lambda) = word(&p, &m, band, 0)?;
            let (ga, _) = word(&p, &m, arc, 0)?;
            let twisted = dehn_twist(&m, &ga, &gb.word).map_err(invalid)?;
            let o = oracle(cli, &p);
            let b = curve_complex(&p, &m, &gb, lambda).map_err(invalid)?;
            let y = string_complex(&p, &m, &ga).map_err(invalid)?;
            let mut probes = stalk_probes(&p, cli.probe_window.max(1));
            probes.push(b.clone());
            let geometric = string_complex(&p, &m, &twisted).map_err(|e| Failure::Internal(e.to_string()))?;
            let agree = match o.spherical_twist(&b, &y, &probes) {
                Ok(t) => Some(o.same_fingerprint(&t, &geometric, cli.probe_window)),
                Err(_) => None,
            };
            let text = word_to_text(&p, &m, &twisted.word, None);
            emit(
                cli,
                json!({ "twisted": text, "degrees": twisted.grading.degrees, "spherical_agrees": agree }),
                || match agree {
                    Some(a) => format!("{text} {:?}\nspherical twist agrees: {a}", twisted.grading.degrees),
                    None => format!("{text} {:?}\nband is not spherical", twisted.grading.degrees),
                },
            );
            match agree {
                Some(false) => Err(Failure::Internal("Dehn twist and spherical twist differ".into())),
                _ => Ok(()),
            }
        }
        Cmd::Endo { file, arcs } => {
            let (p, m) = loaded(file)?;
            let system = match arcs {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
                    parse_arc_system(&p, &m, &text).map_err(invalid)?
                }
                None => ArcSystem::dual(&m),
            };
            let q = endo_presentation(&p, &m, &system).map_err(invalid)?;
            let check = arcs.is_none().then(|| roundtrip_check(&p));
            emit(
                cli,
                json!({ "presentation": q.to_canonical_json(), "roundtrip": check.as_ref().map(|r| r.ok) }),
                || q.emit(),
            );
            match check {
                Some(r) if !r.ok => Err(Failure::Internal(r.message)),
                _ => Ok(()),
            }
        }
        Cmd::Corpus { count, max_vertices, max_arrows, out } => {
            let spec = CorpusSpec {
                count: *count,
                max_vertices: *max_vertices,
                max_arrows: *max_arrows,
                seed: cli.seed,
            };
            let corpus = gen_corpus(&spec);
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Failure::Validation(e.to_string()))?;
                    for (i, p) in corpus.iter().enumerate() {
                        std::fs::write(dir.join(format!("corpus_{i:03}.gp")), p.emit())
                            .map_err(|e| Failure::Internal(e.to_string()))?;
                    }
                }
                None if cli.json => emit(
                    cli,
                    json!(corpus.iter().map(|p| p.to_canonical_json()).collect::<Vec<_>>()),
                    String::new,
                ),
                None => {
                    for (i, p) in corpus.iter().enumerate() {
                        println!("# corpus {i}\n{}", p.emit());
                    }
                }
            }
            Ok(())
        }
        Cmd::Selftest { only } => {
            let results = match only {
                Some(id) if (1..=selftest::CRITERIA.len()).contains(id) => vec![selftest::run_criterion(*id, cli.seed)],
                Some(id) => return Err(invalid(format!("no criterion {id}"))),
                None => selftest::run_all(cli.seed),
            };
            emit(cli, json!(results), || {
                results.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n")
            });
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Internal("self-test failed".into()))
            }
        }
    }
}
