use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cohomolib::abelian::decompose_abelian;
use cohomolib::cohomology::{Cochain2, OracleModule, TableModule};
use cohomolib::counting::{count_h2_bbox, count_h2_table_with_cap};
use cohomolib::equivalence::{
    test_equiv_bbox_abelian_g, test_equiv_bbox_small_g, test_equiv_table, verify_witness, Certificate,
    EquivConfig, EquivalenceVerdict, TableTester,
};
use cohomolib::group::{shared_instances, ExtensionInstance, GroupOracle, Handle};
use cohomolib::hardness::{make_qr_instance_with, qr_ground_truth, realize_extension_table, table_module_oracle};
use cohomolib::io::{self, ExtensionSpec, QrSpec};
use cohomolib::oracle::{brute_b2_membership, enumerate_cohomology};
use cohomolib::{ActionSpec, EncodedOracle, GroupTable, TableExtension, UnitsOracle};

#[derive(Parser)]
#[command(name = "cohomolib", version, about = "Equivalence testing and counting of group extensions")]
struct Cli {
    /// Seed for every randomized step, in hex.
    #[arg(long, global = true, default_value = "0", value_parser = parse_hex)]
    seed: u64,
    /// Random samples per bit of group-order bound.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    sample_multiplier: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest `|A|·|G|³` for which `B³` is built as a table.
    #[arg(long, global = true, env = "COHOMOLIB_CAP_B3", default_value_t = cohomolib::counting::B3_POINT_CAP,
          value_parser = clap::value_parser!(usize))]
    cap_b3: usize,
    /// Largest number of cochains brute-force checks may enumerate.
    #[arg(long, global = true, env = "COHOMOLIB_CAP_ENUM", default_value_t = cohomolib::oracle::ENUMERATION_CAP)]
    cap_enum: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Table,
    BboxSmallG,
    BboxAbelianG,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMode {
    Table,
    Bbox,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Small,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two extensions are equivalent (exit 0 yes, 1 no, 2 error).
    Equiv {
        #[arg(long, value_enum, default_value_t = Mode::Table)]
        mode: Mode,
        /// A residuosity instance such as `N=15,y=4`.
        #[arg(long, conflicts_with = "files")]
        qr: Option<String>,
        /// Two extension files, or one file holding a `qr` line.
        #[arg(num_args = 1..=2)]
        files: Vec<PathBuf>,
    },
    /// Print |C2|, |B3|, |Z2|, |B2| and |H2| for G acting on A.
    Count {
        g: String,
        a: String,
        /// `trivial`, `inversion` or an action file.
        #[arg(long, default_value = "trivial")]
        action: String,
        #[arg(long, value_enum, default_value_t = CountMode::Table)]
        mode: CountMode,
    },
    /// Write a residuosity instance line, e.g. `qr-gen N=15 y=2 seed=1`.
    QrGen {
        #[arg(required = true)]
        spec: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose an abelian group into invariant factors.
    Decompose { group: String },
    /// Replay witnesses and cross-check against brute force.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Small)]
        suite: Suite,
    },
}

fn parse_hex(s: &str) -> Result<u64, String> {
    u64::from_str_radix(s.strip_prefix("0x").unwrap_or(s), 16).map_err(|e| e.to_string())
}

struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn new(format: Format, seed: u64) -> Self {
        let mut o = Out { format, buf: String::new() };
        o.kv("seed", &format!("{seed:x}"));
        o
    }

    fn kv(&mut self, key: &str, value: &str) {
        let _ = match self.format {
            Format::Text => writeln!(self.buf, "{key}: {value}"),
            Format::Kv => writeln!(self.buf, "{key}={value}"),
        };
    }

    fn block(&mut self, key: &str, text: &str) {
        match self.format {
            Format::Text => self.buf.push_str(text),
            Format::Kv => {
                for (i, l) in text.lines().enumerate() {
                    let _ = match l.split_once(": ") {
                        Some((k, v)) if !k.contains(' ') => writeln!(self.buf, "{k}={v}"),
                        _ => writeln!(self.buf, "{key}.{i}={l}"),
                    };
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.format, cli.seed);
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            print!("{}", out.buf);
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    print!("{}", out.buf);
    ExitCode::from(code)
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8> {
    let cfg = EquivConfig { sample_multiplier: cli.sample_multiplier as usize, ..EquivConfig::with_seed(cli.seed) };
    match &cli.cmd {
        Cmd::Equiv { mode, qr, files } => {
            let input = match (qr, files.as_slice()) {
                (Some(q), []) => Input::Qr(QrSpec::parse(q)?),
                (None, [f]) => {
                    let text = io::read_file(f)?;
                    Input::Qr(QrSpec::parse(text.lines().find(|l| !l.trim().is_empty() && !l.starts_with('#')).unwrap_or(""))?)
                }
                (None, [f1, f2]) => Input::Files(load_extension(f1)?, load_extension(f2)?),
                _ => bail!("give two extension files, one qr file, or --qr"),
            };
            cmd_equiv(*mode, input, &cfg, out)
        }
        Cmd::Count { g, a, action, mode } => {
            let g = io::resolve_group(g, None)?;
            let a = io::resolve_group(a, None)?;
            let action = load_action(action, &g, &a)?;
            let count = match mode {
                CountMode::Table => count_h2_table_with_cap(&g, &a, &action, cli.cap_b3)?,
                CountMode::Bbox => {
                    let (oracle, act) = table_module_oracle(&a, &action, cli.seed);
                    count_h2_bbox(&g, oracle, act, cli.seed, cli.sample_multiplier as usize)?
                }
            };
            match out.format {
                Format::Text => {
                    let _ = writeln!(out.buf, "{count}");
                }
                Format::Kv => {
                    out.kv("c2", &count.size_c2.to_string());
                    out.kv("b3", &count.size_b3.to_string());
                    out.kv("z2", &count.size_z2.to_string());
                    out.kv("b2", &count.size_b2.to_string());
                    out.kv("h2", &count.size_h2.to_string());
                }
            }
            Ok(0)
        }
        Cmd::QrGen { spec, output } => {
            let mut q = QrSpec::parse(&spec.join(" "))?;
            if !spec.iter().any(|s| s.contains("seed=")) {
                q.seed = cli.seed;
            }
            make_qr_instance_with(q.modulus, q.y, q.seed, cli.sample_multiplier as usize)?;
            let line = format!("{q}\n");
            match output {
                Some(p) => std::fs::write(p, &line).with_context(|| format!("writing {}", p.display()))?,
                None => out.buf.push_str(&line),
            }
            Ok(0)
        }
        Cmd::Decompose { group } => {
            let oracle: Arc<dyn GroupOracle> = match group.strip_prefix("units:") {
                Some(n) => Arc::new(UnitsOracle::new(n.trim().parse()?, cli.seed, cli.sample_multiplier as usize)?),
                None => Arc::new(EncodedOracle::new(io::resolve_group(group, None)?, cli.seed)),
            };
            let dec = decompose_abelian(&oracle.generators(), oracle.clone())?;
            let ds: Vec<String> = dec.invariants().iter().map(|d| d.to_string()).collect();
            out.kv("decomp", &ds.join(" "));
            out.kv("order", &dec.order().to_string());
            Ok(0)
        }
        Cmd::Verify { suite: Suite::Small } => verify_small(&cfg, cli.cap_enum, out),
    }
}

enum Input {
    Qr(QrSpec),
    Files(ExtensionSpec, ExtensionSpec),
}

fn load_extension(path: &Path) -> Result<ExtensionSpec> {
    let text = io::read_file(path)?;
    io::parse_extension(&text, path.parent()).with_context(|| format!("reading {}", path.display()))
}

fn load_action(spec: &str, g: &GroupTable, a: &GroupTable) -> Result<ActionSpec> {
    Ok(match spec {
        "trivial" | "inversion" => io::parse_action(&format!("action {spec}"), g, a)?,
        path => io::parse_action(&io::read_file(Path::new(path))?, g, a)?,
    })
}

fn qr_tables(q: &QrSpec) -> Result<(TableExtension, TableExtension)> {
    let a = GroupTable::units_mod_n(q.modulus)?;
    let g = GroupTable::cyclic(2);
    let m = TableModule::new(&a, &ActionSpec::Trivial);
    let y = a.index_of_residue(q.y % q.modulus).context("y is not a unit mod N")? as u32;
    let f1 = Cochain2::from_fn(2, &m, |_, _| y);
    let f2 = Cochain2::zero(2, &m);
    Ok((
        realize_extension_table(&a, &g, &f1, &ActionSpec::Trivial)?,
        realize_extension_table(&a, &g, &f2, &ActionSpec::Trivial)?,
    ))
}

fn cmd_equiv(mode: Mode, input: Input, cfg: &EquivConfig, out: &mut Out) -> Result<u8> {
    let mode_name = match mode {
        Mode::Table => "table",
        Mode::BboxSmallG => "bbox-small-g",
        Mode::BboxAbelianG => "bbox-abelian-g",
    };
    out.kv("mode", mode_name);
    if let Input::Qr(q) = &input {
        out.kv("instance", &q.to_string());
    }
    let equivalent = match (mode, input) {
        (Mode::Table, Input::Qr(q)) => {
            let (t1, t2) = qr_tables(&q)?;
            emit_table(out, test_equiv_table(&t1, &t2, cfg)?)
        }
        (Mode::Table, Input::Files(s1, s2)) => {
            let v = test_equiv_table(&s1.to_table_extension()?, &s2.to_table_extension()?, cfg)?;
            emit_table(out, v)
        }
        (_, Input::Qr(q)) => {
            let inst = make_qr_instance_with(q.modulus, q.y, q.seed, cfg.sample_multiplier)?;
            emit_bbox(out, run_bbox(mode, &inst.e1, &inst.e2, cfg)?)
        }
        (_, Input::Files(s1, s2)) => {
            let (t1, t2) = (s1.to_table_extension()?, s2.to_table_extension()?);
            if t1.kernel() != t2.kernel() || t1.quotient() != t2.quotient() {
                bail!("the extensions have different G or A");
            }
            let insts = shared_instances(&[&t1, &t2], cfg.seed);
            emit_bbox(out, run_bbox(mode, &insts[0], &insts[1], cfg)?)
        }
    };
    Ok(if equivalent { 0 } else { 1 })
}

fn run_bbox(mode: Mode, e1: &ExtensionInstance, e2: &ExtensionInstance, cfg: &EquivConfig) -> Result<EquivalenceVerdict<Handle>> {
    Ok(match mode {
        Mode::BboxSmallG => test_equiv_bbox_small_g(e1, e2, cfg)?,
        _ => test_equiv_bbox_abelian_g(e1, e2, cfg)?,
    })
}

fn emit_table(out: &mut Out, v: EquivalenceVerdict<u32>) -> bool {
    out.block("data", &io::format_verdict_table(&v));
    v.equivalent
}

fn emit_bbox(out: &mut Out, v: EquivalenceVerdict<Handle>) -> bool {
    out.block("data", &io::format_verdict_handles(&v));
    v.equivalent
}

/// Exhaustive agreement on every pair of cocycles for a few tiny modules,
/// witness replay, counting against enumeration and the residuosity paths
/// for `N = 15`.
fn verify_small(cfg: &EquivConfig, cap: u64, out: &mut Out) -> Result<u8> {
    let cases: Vec<(&str, GroupTable, &str, GroupTable, bool)> = vec![
        ("cyclic:2", GroupTable::cyclic(2), "cyclic:2", GroupTable::cyclic(2), false),
        ("cyclic:2", GroupTable::cyclic(2), "cyclic:3", GroupTable::cyclic(3), true),
        ("cyclic:3", GroupTable::cyclic(3), "cyclic:3", GroupTable::cyclic(3), false),
        ("cyclic:4", GroupTable::cyclic(4), "cyclic:2", GroupTable::cyclic(2), false),
        ("abelian:2,2", GroupTable::abelian(&[2, 2]), "cyclic:2", GroupTable::abelian(&[2]), false),
    ];
    let mut failures = 0usize;
    for (gname, g, aname, a, inversion) in cases {
        let action = if inversion { ActionSpec::inversion(&g, &a)? } else { ActionSpec::Trivial };
        let m = TableModule::new(&a, &action);
        let c2 = (a.order() as u64).checked_pow(((g.order() - 1) * (g.order() - 1)) as u32);
        if c2.map_or(true, |c| c > cap) {
            bail!("|C2| for G={gname}, A={aname} exceeds the enumeration cap {cap}");
        }
        let en = enumerate_cohomology(&g, &a, &action)?;
        let count = count_h2_table_with_cap(&g, &a, &action, usize::MAX)?;
        let (oracle, act) = table_module_oracle(&a, &action, cfg.seed);
        let bcount = count_h2_bbox(&g, oracle, act, cfg.seed, cfg.sample_multiplier)?;
        let h2 = en.h2_size() as u64;
        let counts_ok = count.size_h2 == h2.into() && bcount.size_h2 == h2.into();
        let exts: Vec<TableExtension> = en
            .z2
            .iter()
            .map(|f| realize_extension_table(&a, &g, f, &action))
            .collect::<Result<_, _>>()?;
        let class = en.class_of();
        let tester = TableTester::new(&g, &a, &action, cfg)?;
        let mut mismatches = 0usize;
        let mut bad_witnesses = 0usize;
        for i in 0..exts.len() {
            for j in 0..exts.len() {
                let v = test_equiv_table(&exts[i], &exts[j], cfg)?;
                let diff = en.z2[i].sub(&en.z2[j], &m);
                let brute = brute_b2_membership(&diff, &g, &a, &action)?.is_some();
                let direct = tester.test_cocycles(&en.z2[i], &en.z2[j])?;
                if v.equivalent != brute || direct.equivalent != brute || v.equivalent != (class[i] == class[j]) {
                    mismatches += 1;
                }
                if direct.has_witness() && !verify_witness(&direct, &diff, &g, &m) {
                    bad_witnesses += 1;
                }
            }
        }
        let ok = counts_ok && mismatches == 0 && bad_witnesses == 0;
        failures += usize::from(!ok);
        let act = if inversion { "inversion" } else { "trivial" };
        out.kv(
            &format!("check G={gname} A={aname} action={act}"),
            &format!(
                "{} pairs={} mismatches={mismatches} bad_witnesses={bad_witnesses} |H2|={h2} table={} bbox={}",
                pass(ok),
                exts.len() * exts.len(),
                count.size_h2,
                bcount.size_h2
            ),
        );
    }
    let mut qr_mismatches = 0usize;
    for y in (1..15u64).filter(|y| num_gcd(*y, 15) == 1) {
        let truth = qr_ground_truth(15, y)?;
        let q = QrSpec { modulus: 15, y, seed: cfg.seed ^ y };
        let (t1, t2) = qr_tables(&q)?;
        let inst = make_qr_instance_with(15, y, q.seed, cfg.sample_multiplier)?;
        let abelian = test_equiv_bbox_abelian_g(&inst.e1, &inst.e2, cfg)?;
        let verdicts = [
            test_equiv_table(&t1, &t2, cfg)?.equivalent,
            test_equiv_bbox_small_g(&inst.e1, &inst.e2, cfg)?.equivalent,
            abelian.equivalent,
        ];
        qr_mismatches += verdicts.iter().filter(|v| **v != truth).count();
        if let Certificate::Roots { .. } = abelian.certificate {
            let m = OracleModule::new(inst.kernel.clone(), None);
            if !verify_witness(&abelian, &Cochain2::zero(2, &m), &inst.quotient, &m) {
                qr_mismatches += 1;
            }
        }
    }
    failures += usize::from(qr_mismatches != 0);
    out.kv("check qr N=15", &format!("{} mismatches={qr_mismatches}", pass(qr_mismatches == 0)));
    out.kv("result", pass(failures == 0));
    Ok(if failures == 0 { 0 } else { 1 })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
