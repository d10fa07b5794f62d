use clap::{Args, Parser, Subcommand};
use sephier_core::basis::{BasisJson, Basis};
use sephier_core::decide::{
    builtin_level, custom_level, decide_covering, decide_separation, decision_from_run,
    run_covering, sigma1_oracle, Level, LevelKind,
};
use sephier_core::gen::random_regex;
use sephier_core::lang::{compile, parse_regex, Alphabet, Automaton, NfaJson};
use sephier_core::monoid::{make_c_compatible, transition_monoid};
use sephier_core::pol::pol_fixpoint;
use sephier_core::rating::build_rating_map;
use sephier_core::witness::{synthesize_pol_cover, verify_cover};
use sephier_core::{Caps, Error};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sephier",
    version = concat!(env!("CARGO_PKG_VERSION"), " (formats: json v1)"),
    about = "Separation and covering deciders for polynomial-closure classes of regular languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Alphabet letters (default: inferred from the inputs).
    #[arg(long, global = true)]
    alphabet: Option<String>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct CapArgs {
    /// Maximum transition-monoid size.
    #[arg(long, global = true)]
    monoid_cap: Option<usize>,
    /// Maximum subset-construction states.
    #[arg(long, global = true)]
    determinize_cap: Option<usize>,
    /// Maximum materialized descendants per element.
    #[arg(long, global = true)]
    downset_cap: Option<usize>,
    /// Maximum fixpoint additions.
    #[arg(long, global = true)]
    iteration_cap: Option<usize>,
    /// Maximum stored maximal pairs.
    #[arg(long, global = true)]
    stored_cap: Option<usize>,
    /// Maximum synthesized expressions.
    #[arg(long, global = true)]
    expression_cap: Option<usize>,
    /// Word-length bound for bounded verification.
    #[arg(long, global = true)]
    check_len: Option<usize>,
    /// Call budget of the stratified-preorder oracle.
    #[arg(long, global = true)]
    strata_budget: Option<usize>,
}

impl CapArgs {
    fn to_caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(v) = self.monoid_cap {
            caps.monoid_cap = v;
        }
        if let Some(v) = self.determinize_cap {
            caps.determinize_cap = v;
        }
        if let Some(v) = self.downset_cap {
            caps.downset_cap = v;
        }
        if let Some(v) = self.iteration_cap {
            caps.iteration_cap = v;
        }
        if let Some(v) = self.stored_cap {
            caps.stored_cap = v;
        }
        if let Some(v) = self.expression_cap {
            caps.expression_cap = v;
        }
        if let Some(v) = self.check_len {
            caps.check_len = v;
        }
        if let Some(v) = self.strata_budget {
            caps.strata_budget = v;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the first language is separable from the second.
    Sep {
        #[arg(long)]
        class: String,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        /// Attach a separator description to positive answers when available.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dump_monoid: bool,
        #[arg(long)]
        dump_rating: bool,
    },
    /// Decide whether the target is coverable against the given languages.
    Cover {
        #[arg(long)]
        class: String,
        #[arg(long)]
        target: String,
        #[arg(long, required = true)]
        against: Vec<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dump_monoid: bool,
        #[arg(long)]
        dump_rating: bool,
    },
    /// Compute and dump the saturated pair set for an instance.
    Imprint {
        #[arg(long)]
        class: String,
        #[arg(long)]
        target: String,
        #[arg(long, required = true)]
        against: Vec<String>,
        /// Also dump the auxiliary stored pair family (can be large).
        #[arg(long)]
        dump_tt: bool,
        #[arg(long)]
        dump_monoid: bool,
        #[arg(long)]
        dump_rating: bool,
    },
    /// Synthesize and verify a bounded cover for a language.
    Witness {
        #[arg(long)]
        class: String,
        #[arg(long)]
        lang: String,
        #[arg(long)]
        max_check_len: Option<usize>,
    },
    /// Run the independent subword-closure separation oracle.
    Oracle {
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the differential self-test suite.
    Selftest {
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = cli.caps.to_caps();
    match dispatch(&cli, &caps) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn infer_alphabet(cli: &Cli, specs: &[&str]) -> Result<Alphabet, Error> {
    if let Some(s) = &cli.alphabet {
        return Alphabet::from_str(s);
    }
    let mut letters: Vec<u8> = Vec::new();
    for spec in specs {
        if let Some(re) = spec.strip_prefix("re:") {
            // '%e' and '%0' are grammar literals, not letters
            let stripped = re.replace("%e", "").replace("%0", "");
            for b in stripped.bytes() {
                if b.is_ascii_lowercase() && !letters.contains(&b) {
                    letters.push(b);
                }
            }
        } else if let Some(path) = spec.strip_prefix("nfa:") {
            let text = std::fs::read_to_string(path)?;
            let nfa: NfaJson = serde_json::from_str(&text)?;
            for sym in &nfa.alphabet {
                let b = sym.as_bytes()[0];
                if !letters.contains(&b) {
                    letters.push(b);
                }
            }
        }
    }
    letters.sort_unstable();
    if letters.is_empty() {
        letters.extend_from_slice(b"ab");
    }
    Alphabet::new(&letters)
}

fn load_language(spec: &str, alphabet: &Alphabet) -> Result<Automaton, Error> {
    if let Some(re) = spec.strip_prefix("re:") {
        Ok(compile(&parse_regex(re, alphabet)?, alphabet))
    } else if let Some(path) = spec.strip_prefix("nfa:") {
        let text = std::fs::read_to_string(path)?;
        let nfa: NfaJson = serde_json::from_str(&text)?;
        let a = nfa.to_automaton()?;
        if a.alphabet != *alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{path} uses alphabet {} (expected {alphabet})",
                a.alphabet
            )));
        }
        Ok(a)
    } else {
        Err(Error::InvalidAutomaton(format!(
            "language spec '{spec}' must start with 're:' or 'nfa:'"
        )))
    }
}

fn load_level(class: &str, alphabet: &Alphabet) -> Result<Level, Error> {
    if let Some(path) = class.strip_prefix("pol:") {
        let basis = load_basis(path, alphabet)?;
        Ok(custom_level(LevelKind::Pol, basis))
    } else if let Some(path) = class.strip_prefix("pbpol:") {
        let basis = load_basis(path, alphabet)?;
        Ok(custom_level(LevelKind::Pbpol, basis))
    } else {
        builtin_level(class, alphabet)
    }
}

fn load_basis(path: &str, alphabet: &Alphabet) -> Result<Basis, Error> {
    let text = std::fs::read_to_string(path)?;
    let json: BasisJson = serde_json::from_str(&text)?;
    json.to_basis(alphabet)
}

fn decision_exit(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dump_monoid_json(target: &Automaton, level: &Level, caps: &Caps) -> Result<(), Error> {
    let alpha = make_c_compatible(
        &transition_monoid(target, caps.monoid_cap)?,
        &level.basis,
        caps.monoid_cap,
    )?;
    let classes: Vec<u16> =
        (0..alpha.monoid.size as u16).map(|s| alpha.class_of(s)).collect();
    println!(
        "{}",
        json!({
            "monoid": alpha.monoid,
            "letter_image": alpha.letter_image,
            "accepting": alpha.accepting,
            "class_of": classes,
        })
    );
    Ok(())
}

fn dump_rating_json(level: &Level, against: &[Automaton], caps: &Caps) -> Result<(), Error> {
    let rm = build_rating_map(&level.basis, against, caps)?;
    let sizes: Vec<usize> = rm.hemiring.components.iter().map(|c| c.size).collect();
    let letters: Vec<String> = rm
        .basis
        .alphabet()
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &b)| format!("{}:{}", b as char, rm.hemiring.render(&rm.letter_image[i])))
        .collect();
    println!(
        "{}",
        json!({
            "component_sizes": sizes,
            "letter_images": letters,
            "eps_image": rm.hemiring.render(&rm.eps_image),
        })
    );
    Ok(())
}

fn dispatch(cli: &Cli, caps: &Caps) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Sep { class, l1, l2, witness, json: as_json, dump_monoid, dump_rating } => {
            let alphabet = infer_alphabet(cli, &[l1.as_str(), l2.as_str()])?;
            let level = load_level(class, &alphabet)?;
            let a1 = load_language(l1, &alphabet)?;
            let a2 = load_language(l2, &alphabet)?;
            if *dump_monoid {
                dump_monoid_json(&a1, &level, caps)?;
            }
            if *dump_rating {
                dump_rating_json(&level, std::slice::from_ref(&a2), caps)?;
            }
            let d = decide_separation(&level, &a1, &a2, caps, *witness)?;
            if *as_json {
                println!("{}", d.to_json());
            } else {
                println!(
                    "{}: {} is {}separable from {}",
                    level.name,
                    l1,
                    if d.positive { "" } else { "NOT " },
                    l2
                );
            }
            Ok(decision_exit(d.positive))
        }
        Command::Cover { class, target, against, json: as_json, dump_monoid, dump_rating } => {
            let mut specs: Vec<&str> = vec![target.as_str()];
            specs.extend(against.iter().map(|s| s.as_str()));
            let alphabet = infer_alphabet(cli, &specs)?;
            let level = load_level(class, &alphabet)?;
            let t = load_language(target, &alphabet)?;
            let langs: Vec<Automaton> = against
                .iter()
                .map(|s| load_language(s, &alphabet))
                .collect::<Result<_, _>>()?;
            if *dump_monoid {
                dump_monoid_json(&t, &level, caps)?;
            }
            if *dump_rating {
                dump_rating_json(&level, &langs, caps)?;
            }
            let d = decide_covering(&level, &t, &langs, caps)?;
            if *as_json {
                println!("{}", d.to_json());
            } else {
                println!(
                    "{}: target is {}coverable against {} language(s)",
                    level.name,
                    if d.positive { "" } else { "NOT " },
                    langs.len()
                );
            }
            Ok(decision_exit(d.positive))
        }
        Command::Imprint { class, target, against, dump_tt, dump_monoid, dump_rating } => {
            let mut specs: Vec<&str> = vec![target.as_str()];
            specs.extend(against.iter().map(|s| s.as_str()));
            let alphabet = infer_alphabet(cli, &specs)?;
            let level = load_level(class, &alphabet)?;
            let t = load_language(target, &alphabet)?;
            let langs: Vec<Automaton> = against
                .iter()
                .map(|s| load_language(s, &alphabet))
                .collect::<Result<_, _>>()?;
            if *dump_monoid {
                dump_monoid_json(&t, &level, caps)?;
            }
            if *dump_rating {
                dump_rating_json(&level, &langs, caps)?;
            }
            let run = run_covering(&level, &t, &langs, caps, None)?;
            let pairs: Vec<serde_json::Value> = match (&run.pol, &run.pbpol) {
                (Some(p), _) => p
                    .canonical_pairs()
                    .iter()
                    .map(|(s, r)| json!({"s": s, "r": run.rm.hemiring.render(r)}))
                    .collect(),
                (_, Some(p)) => p
                    .canonical_pairs()
                    .iter()
                    .map(|(s, r)| json!({"s": s, "r": run.rm.hemiring.render(r)}))
                    .collect(),
                _ => Vec::new(),
            };
            let mut doc = json!({
                "class": level.name,
                "max_pairs": pairs,
                "stats": {
                    "S_size": run.stats.s_size,
                    "TT_size": run.stats.tt_size,
                    "iterations": run.stats.iterations,
                },
            });
            if *dump_tt {
                if let Some(p) = &run.pbpol {
                    let tt: Vec<serde_json::Value> = p
                        .canonical_tpairs()
                        .iter()
                        .map(|(f, t)| {
                            json!({
                                "f": run.rm.hemiring.render(f),
                                "t": t.iter()
                                    .map(|(s, r)| json!({"s": s, "r": run.rm.hemiring.render(r)}))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    doc["tt"] = json!(tt);
                }
            }
            println!("{doc}");
            let d = decision_from_run(&run);
            Ok(decision_exit(d.positive))
        }
        Command::Witness { class, lang, max_check_len } => {
            let alphabet = infer_alphabet(cli, &[lang.as_str()])?;
            let level = load_level(class, &alphabet)?;
            if level.kind != LevelKind::Pol {
                return Err(Error::Synthesis(
                    "witness synthesis supports polynomial-closure levels only".into(),
                ));
            }
            let a = load_language(lang, &alphabet)?;
            let mut local_caps = caps.clone();
            if let Some(n) = max_check_len {
                local_caps.check_len = *n;
            }
            let rm = build_rating_map(&level.basis, std::slice::from_ref(&a), &local_caps)?;
            let alpha = make_c_compatible(
                &transition_monoid(&a, local_caps.monoid_cap)?,
                &level.basis,
                local_caps.monoid_cap,
            )?;
            let pol = pol_fixpoint(&alpha, &rm, &local_caps, None)?;
            let h = 3 * alpha.monoid.size - 1;
            let mut all = Vec::new();
            let mut all_ok = true;
            for s in 0..alpha.monoid.size as u16 {
                let synth = synthesize_pol_cover(&alpha, &rm, s, h, h, &local_caps)?;
                let report =
                    verify_cover(&synth.exprs, &alpha, &rm, &pol, s, local_caps.check_len)?;
                all_ok &= report.ok();
                all.push(json!({
                    "element": s,
                    "k_bound": synth.k_bound,
                    "expressions": report.per_expr.iter()
                        .map(|e| json!({
                            "expr": e.rendered,
                            "rho": e.rho,
                            "in_imprint": e.in_imprint,
                        }))
                        .collect::<Vec<_>>(),
                    "checked_words": report.checked_words,
                    "uncovered": report.uncovered,
                }));
            }
            println!("{}", json!({"class": level.name, "height": h, "covers": all}));
            Ok(decision_exit(all_ok))
        }
        Command::Oracle { l1, l2, json: as_json } => {
            let alphabet = infer_alphabet(cli, &[l1.as_str(), l2.as_str()])?;
            let a1 = load_language(l1, &alphabet)?;
            let a2 = load_language(l2, &alphabet)?;
            let sep = sigma1_oracle(&a1, &a2)?;
            if *as_json {
                println!("{}", json!({"decision": sep}));
            } else {
                println!("subword oracle: {}separable", if sep { "" } else { "NOT " });
            }
            Ok(decision_exit(sep))
        }
        Command::Selftest { count, seed } => {
            let failures = selftest(*count, *seed, caps)?;
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn selftest(count: usize, seed: u64, caps: &Caps) -> Result<usize, Error> {
    let alphabet = Alphabet::from_str("ab")?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pass = 0usize;
    let mut fail = 0usize;
    let mut skipped = 0usize;
    let levels: Vec<Level> = ["sigma1", "sigma2", "sigma3", "dd12", "dd32"]
        .iter()
        .map(|n| builtin_level(n, &alphabet).unwrap())
        .collect();

    for i in 0..count {
        let l1 = compile(&random_regex(&alphabet, 3, &mut rng), &alphabet);
        let l2 = compile(&random_regex(&alphabet, 3, &mut rng), &alphabet);
        let mut answers: Vec<Option<bool>> = Vec::new();
        let mut errored = false;
        for level in &levels {
            match decide_separation(level, &l1, &l2, caps, false) {
                Ok(d) => answers.push(Some(d.positive)),
                Err(e) if e.is_cap() => answers.push(None),
                Err(e) => {
                    eprintln!("instance {i}: unexpected error {e}");
                    errored = true;
                    break;
                }
            }
        }
        if errored {
            fail += 1;
            continue;
        }
        let mut ok = true;
        // lowest level versus the independent oracle
        if let Some(got) = answers[0] {
            ok &= got == sigma1_oracle(&l1, &l2)?;
        }
        // monotonicity along both chains
        for chain in [[0usize, 1, 2].as_slice(), [3, 4].as_slice()] {
            for w in chain.windows(2) {
                if let (Some(a), Some(b)) = (answers[w[0]], answers[w[1]]) {
                    ok &= !a || b;
                }
            }
        }
        // singleton covering coincides with separation
        if let Some(a) = answers[0] {
            if let Ok(c) =
                decide_covering(&levels[0], &l1, std::slice::from_ref(&l2), caps)
            {
                ok &= a == c.positive;
            }
        }
        if answers.iter().all(|a| a.is_none()) {
            skipped += 1;
        } else if ok {
            pass += 1;
        } else {
            fail += 1;
            eprintln!("instance {i}: differential check failed");
        }
    }
    println!("selftest: {pass} passed, {fail} failed, {skipped} skipped (caps)");
    Ok(fail)
}
