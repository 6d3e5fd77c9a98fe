//! Command-line front end. Every result is printed as one envelope; numeric
//! results are cached on disk keyed by operation, inputs and digits.

mod cache;
mod envelope;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer, Rational};

use crate::bounded::{format_bound, BoundedReal};
use crate::error::{Error, Result};
use crate::exact;
use crate::precision::{PrecisionContext, DEFAULT_TARGET_DIGITS};
use crate::quadrature::{self, MomentSpec, PvFunction, PvQuery};
use crate::sumrules::{self, Family, SumRuleSpec};

pub use cache::{Cache, CACHE_ENV};
pub use envelope::{Envelope, Format};

use envelope::Printer;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "besselmoments", version, about = "Bessel moments, sum rules and their integer sequences")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Target number of correct decimal digits (at least 10).
    #[arg(long, global = true, default_value_t = DEFAULT_TARGET_DIGITS)]
    pub digits: u32,
    /// One JSON envelope per line (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Human-readable table.
    #[arg(long, global = true)]
    pub text: bool,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Integrate sum rules as a single combined integrand.
    #[arg(long, global = true)]
    pub fused: bool,
    /// Deepest quadrature level.
    #[arg(long, global = true)]
    pub max_level: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// pi^p * int_0^inf I0^a K0^b t^c dt
    Moment {
        a: u32,
        b: u32,
        c: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        pi_power: i32,
    },
    /// Numerical checks of identities.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Exact sequence values over an inclusive range such as 1..6.
    Sequence {
        name: SequenceName,
        range: String,
        /// The power m for alpha_m and beta_m, or M for br.
        #[arg(long)]
        m: Option<u32>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum Check {
    /// Z-family sum rule, n >= 2k >= 2.
    #[command(name = "Z", alias = "z")]
    Z { n: u32, k: u32 },
    /// Y-family sum rule, n - 1 >= 2k >= 2.
    #[command(name = "Y", alias = "y")]
    Y { n: u32, k: u32 },
    /// Crandall number A(n) by quadrature against the exact value.
    Crandall { n: u32 },
    /// Principal-value Hilbert transform against its closed-form image.
    Hilbert {
        function: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Domb generating-function identity at rational u.
    Rogers {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value_t = 150)]
        terms: u32,
    },
    /// Every check up to the given weight a + b.
    All {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceName {
    Domb,
    Alpha,
    Crandall,
    #[value(name = "alpha_m")]
    AlphaM,
    #[value(name = "beta_m")]
    BetaM,
    Br,
}

impl SequenceName {
    fn as_str(self) -> &'static str {
        match self {
            SequenceName::Domb => "domb",
            SequenceName::Alpha => "alpha",
            SequenceName::Crandall => "crandall",
            SequenceName::AlphaM => "alpha_m",
            SequenceName::BetaM => "beta_m",
            SequenceName::Br => "br",
        }
    }
}

/// Fields of an envelope that depend on the computation.
struct Computed {
    value: String,
    error_bound: String,
    exact: Option<String>,
    pass: Option<bool>,
}

struct Session<'a> {
    ctx: PrecisionContext,
    cache: Option<Cache>,
    printer: Printer<'a>,
    err: &'a mut dyn Write,
    digits: u32,
    fused: bool,
    max_level: Option<u32>,
    failures: usize,
}

impl Session<'_> {
    fn inputs(&self, pairs: &[(&str, String)]) -> BTreeMap<String, String> {
        let mut map: BTreeMap<String, String> =
            pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        if let Some(level) = self.max_level {
            map.insert("max_level".into(), level.to_string());
        }
        map
    }

    /// Look up, or compute, print and store one envelope.
    fn run_cached(
        &mut self,
        command: &str,
        inputs: BTreeMap<String, String>,
        compute: impl FnOnce(&PrecisionContext) -> Result<Computed>,
    ) -> Result<()> {
        let start = Instant::now();
        let key = Cache::key(command, &inputs, self.digits);
        if let Some(cache) = &self.cache {
            if let Some(mut env) = cache.get(&key, self.digits) {
                env.cache_hit = true;
                env.elapsed_ms = start.elapsed().as_millis() as u64;
                return self.emit(&env);
            }
        }
        let c = compute(&self.ctx)?;
        let env = Envelope {
            cache_hit: false,
            command: command.to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            error_bound: c.error_bound,
            exact: c.exact,
            inputs,
            pass: c.pass,
            precision_digits: self.digits,
            value: c.value,
        };
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.put(&key, &env) {
                let _ = writeln!(self.err, "warning: could not write cache entry: {e}");
            }
        }
        self.emit(&env)
    }

    fn emit(&mut self, env: &Envelope) -> Result<()> {
        if env.pass == Some(false) {
            self.failures += 1;
        }
        self.printer
            .emit(env)
            .map_err(|e| Error::Domain(format!("cannot write output: {e}")))
    }

    fn moment(&mut self, spec: MomentSpec) -> Result<()> {
        spec.validate()?;
        let inputs = self.inputs(&[
            ("a", spec.a.to_string()),
            ("b", spec.b.to_string()),
            ("c", spec.c.to_string()),
            ("pi_power", spec.pi_power.to_string()),
        ]);
        let digits = self.digits as usize;
        self.run_cached("moment", inputs, |ctx| {
            let m = quadrature::moment(spec, ctx)?;
            Ok(numeric(&m.value, digits, None, None))
        })
    }

    fn sum_rule(&mut self, family: Family, n: u32, k: u32) -> Result<()> {
        let spec = SumRuleSpec::new(family, n, k)?;
        let fused = self.fused;
        let inputs = self.inputs(&[
            ("rule", family.to_string()),
            ("n", n.to_string()),
            ("k", k.to_string()),
            ("method", if fused { "fused" } else { "terms" }.to_string()),
        ]);
        let digits = self.digits as usize;
        self.run_cached("verify", inputs, |ctx| {
            let report = if fused {
                sumrules::verify_sum_rule_fused(&spec, ctx)?
            } else {
                sumrules::verify_sum_rule(&spec, ctx)?
            };
            Ok(numeric(&report.value, digits, Some("0".into()), Some(report.pass)))
        })
    }

    fn crandall(&mut self, n: u32) -> Result<()> {
        let exact_value = exact::crandall(n)?;
        // Both exact routes must agree before the numeric one is compared.
        if n >= 2 {
            let explicit = exact::crandall_explicit(n - 1)?;
            if explicit != exact_value {
                return Err(Error::ReductionMismatch(format!(
                    "A({n}): convolution gives {exact_value}, triple sum gives {explicit}"
                )));
            }
        }
        let inputs = self.inputs(&[("rule", "crandall".into()), ("n", n.to_string())]);
        let digits = self.digits as usize;
        self.run_cached("verify", inputs, |ctx| {
            let v = sumrules::crandall_numeric(n, ctx)?;
            let target = Float::with_val(ctx.bits(), &exact_value);
            let pass = v.contains(&target);
            Ok(numeric(&v, digits, Some(exact_value.to_string()), Some(pass)))
        })
    }

    fn hilbert(&mut self, function: PvFunction, x: &Rational, x_text: &str) -> Result<()> {
        let inputs = self.inputs(&[
            ("rule", "hilbert".into()),
            ("function", function.to_string()),
            ("x", x_text.to_string()),
        ]);
        let digits = self.digits as usize;
        self.run_cached("verify", inputs, |ctx| {
            let xf = Float::with_val(ctx.bits(), x);
            let pv = quadrature::hilbert_pv(&PvQuery::new(function, xf.clone()), ctx)?;
            let image = quadrature::hilbert_image(function, &xf, ctx)?;
            let pass = pv.clone().widen(image.err()).contains(image.value());
            let mut c = numeric(&pv, digits, Some(image.value_string(digits)), Some(pass));
            c.error_bound = format_bound(&Float::with_val(ctx.bits(), pv.err() + image.err()));
            Ok(c)
        })
    }

    fn rogers(&mut self, u: &Rational, u_text: &str, terms: u32) -> Result<()> {
        let inputs = self.inputs(&[
            ("rule", "rogers".into()),
            ("u", u_text.to_string()),
            ("terms", terms.to_string()),
        ]);
        let digits = self.digits as usize;
        self.run_cached("verify", inputs, |ctx| {
            let v = exact::rogers_check(u, terms, ctx)?;
            let pass = *v.value() <= *v.err();
            Ok(numeric(&v, digits, Some("0".into()), Some(pass)))
        })
    }

    fn all(&mut self, max_weight: u32) -> Result<()> {
        for family in [Family::Z, Family::Y] {
            for n in 2..=max_weight / 2 {
                for k in 1..=n / 2 {
                    if SumRuleSpec::new(family, n, k).is_ok() {
                        self.sum_rule(family, n, k)?;
                    }
                }
            }
        }
        if max_weight >= 8 {
            for n in 1..=5 {
                self.crandall(n)?;
            }
        }
        for function in PvFunction::ALL {
            for x in ["1/2", "1", "2", "5"] {
                self.hilbert(function, &parse_rational(x)?, x)?;
            }
        }
        for (u, terms) in [("1/16", 120), ("1/10", 150)] {
            self.rogers(&parse_rational(u)?, u, terms)?;
        }
        Ok(())
    }

    fn sequence(&mut self, name: SequenceName, range: &str, m: Option<u32>) -> Result<()> {
        let (lo, hi) = parse_range(range)?;
        let min = if name == SequenceName::Domb { 0 } else { 1 };
        if lo < min {
            return Err(Error::InvalidSpec(format!("{} starts at index {min}", name.as_str())));
        }
        let needs_m = matches!(name, SequenceName::AlphaM | SequenceName::BetaM | SequenceName::Br);
        let m = match (needs_m, m) {
            (true, None) => {
                return Err(Error::InvalidSpec(format!("{} needs --m", name.as_str())));
            }
            (true, Some(0)) => return Err(Error::InvalidSpec("--m must be >= 1".into())),
            (_, m) => m,
        };
        for n in lo..=hi {
            let start = Instant::now();
            let value = match name {
                SequenceName::Domb => exact::domb(n).to_string(),
                SequenceName::Alpha => exact::alpha(n)?.to_string(),
                SequenceName::Crandall => exact::crandall(n)?.to_string(),
                SequenceName::AlphaM => exact::alpha_m(m.unwrap_or(1), n)?.to_string(),
                SequenceName::BetaM => exact::beta_m(m.unwrap_or(1), n)?.to_string(),
                SequenceName::Br => exact::broadhurst_roberts(m.unwrap_or(1), n)?.to_string(),
            };
            let mut pairs = vec![("name", name.as_str().to_string()), ("n", n.to_string())];
            if let Some(m) = m.filter(|_| needs_m) {
                pairs.push(("m", m.to_string()));
            }
            let env = Envelope {
                cache_hit: false,
                command: "sequence".into(),
                elapsed_ms: start.elapsed().as_millis() as u64,
                error_bound: "0".into(),
                exact: None,
                inputs: pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                pass: None,
                precision_digits: self.digits,
                value,
            };
            self.emit(&env)?;
        }
        Ok(())
    }
}

fn numeric(v: &BoundedReal, digits: usize, exact: Option<String>, pass: Option<bool>) -> Computed {
    Computed {
        value: v.value_string(digits),
        error_bound: v.err_string(),
        exact,
        pass,
    }
}

/// `p/q`, a decimal such as `-0.0625`, or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidSpec(format!("cannot parse '{s}' as a rational number"));
    let t = s.trim();
    if t.contains('/') {
        let q: Rational = t.parse().map_err(|_| bad())?;
        return Ok(q);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: Integer = if digits.is_empty() {
        Integer::new()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
    let q = Rational::from((num, den));
    Ok(if neg { -q } else { q })
}

/// `a..b`, `a..=b` (both inclusive) or a single index.
pub fn parse_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidSpec(format!("invalid range '{s}' (expected e.g. 1..6)"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn exit_code(e: &Error) -> i32 {
    if e.is_precision_failure() {
        return EXIT_PRECISION;
    }
    match e {
        Error::Divisibility(_) | Error::ReductionMismatch(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Parse `args` (including the program name) and run, writing envelopes to
/// stdout. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_OK };
        }
    };
    execute(cli, out, err)
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let g = &cli.global;
    let ctx = match PrecisionContext::new(g.digits) {
        Ok(ctx) => match g.max_level {
            Some(level) => ctx.with_max_level(level),
            None => ctx,
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let format = if g.text { Format::Text } else { Format::Json };
    let cache = if g.no_cache { None } else { Cache::from_env() };
    let mut session = Session {
        ctx,
        cache,
        printer: Printer::new(out, format),
        err,
        digits: g.digits,
        fused: g.fused,
        max_level: g.max_level,
        failures: 0,
    };

    let outcome = match &cli.command {
        Command::Moment { a, b, c, pi_power } => {
            session.moment(MomentSpec::new(*a, *b, *c).with_pi_power(*pi_power))
        }
        Command::Sequence { name, range, m } => session.sequence(*name, range, *m),
        Command::Verify { check } => match check {
            Check::Z { n, k } => session.sum_rule(Family::Z, *n, *k),
            Check::Y { n, k } => session.sum_rule(Family::Y, *n, *k),
            Check::Crandall { n } => session.crandall(*n),
            Check::Hilbert { function, x } => function
                .parse::<PvFunction>()
                .and_then(|f| Ok((f, parse_rational(x)?)))
                .and_then(|(f, q)| session.hilbert(f, &q, x)),
            Check::Rogers { u, terms } => {
                parse_rational(u).and_then(|q| session.rogers(&q, u, *terms))
            }
            Check::All { max_weight } => session.all(*max_weight),
        },
    };
    match outcome {
        Err(e) => {
            let _ = writeln!(session.err, "error: {e}");
            exit_code(&e)
        }
        Ok(()) if session.failures > 0 => EXIT_VERIFY_FAILED,
        Ok(()) => EXIT_OK,
    }
}
