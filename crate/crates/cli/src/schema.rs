//! Parameter schemas. Clap flags are generated from these tables, and config
//! files are validated against them.

use clap::{Arg, ArgAction, Command};

pub struct Param {
    pub name: &'static str,
    pub help: &'static str,
    pub flag: bool,
}

const fn v(name: &'static str, help: &'static str) -> Param {
    Param { name, help, flag: false }
}

const fn f(name: &'static str, help: &'static str) -> Param {
    Param { name, help, flag: true }
}

pub struct Schema {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [Param],
}

const PSI: Param = v("psi", "approximation function: const:V[@A..B], inv:C@A..B, list:n=v,..., ds:k:a:b:variant");
const THETA: Param = v("theta", "second approximation function (defaults to psi)");
const WEIGHT: Param = v("weight", "multiplicative weight: phi, one, unit or id (default phi)");

pub const SCHEMAS: &[Schema] = &[
    Schema {
        name: "phi",
        about: "Euler's totient and the Gauss identity at n",
        params: &[v("n", "positive integer")],
    },
    Schema {
        name: "count",
        about: "S(N, alpha): coprime solutions of |alpha - a/n| <= psi(n)/n with n <= N",
        params: &[v("alpha", "rational in [0, 1]"), v("n", "N"), PSI],
    },
    Schema {
        name: "psi-mass",
        about: "Psi(N) = sum 2 phi(n) psi(n) / n",
        params: &[v("n", "N"), PSI],
    },
    Schema {
        name: "overlap",
        about: "overlap of A_n and A_m against the prime-product bound",
        params: &[
            v("n", "first index"),
            v("m", "second index"),
            PSI,
            v("mode", "constant, general or optimized (default constant)"),
            v("u", "general mode: u"),
            v("t", "general mode: T"),
            v("rho", "optimized mode: rho (default 1/10)"),
        ],
    },
    Schema {
        name: "edge-set",
        about: "pairs with D(v, w) <= 1 and anatomy mass at least C over primes >= t",
        params: &[PSI, THETA, v("t", "prime cutoff (default 1)"), v("c", "anatomy level C (default 0)")],
    },
    Schema {
        name: "layer-matrix",
        about: "p-adic layer matrix of an edge set, optionally checked against the bilinear bound",
        params: &[
            PSI,
            THETA,
            v("t", "prime cutoff (default 1)"),
            v("c", "anatomy level C (default 0)"),
            v("p", "prime"),
            v("c1", "constant of the bilinear bound; enables the check"),
            v("eps", "epsilon in (0, 1/2) for the bilinear check (default 2/5)"),
        ],
    },
    Schema {
        name: "verify-main",
        about: "main theorem ratio on one edge set, or the calibration sweep with --sweep",
        params: &[
            PSI,
            THETA,
            v("t", "prime cutoff (default 1)"),
            v("c", "anatomy level C (default 0)"),
            v("eps", "epsilon in (0, 1/2) (default 2/5)"),
            v("p0", "small-prime cutoff in P(eps) (default 10)"),
            WEIGHT,
            f("sweep", "run the calibration family instead of a single instance"),
            v("hi", "sweep: supports inside [1, hi] (default 30)"),
            v("random", "sweep: number of seeded random instances (default 200)"),
        ],
    },
    Schema {
        name: "verify-prop54",
        about: "lhs t of the rescaled pair sum over a list of t",
        params: &[
            PSI,
            v("x", "lower end X"),
            v("y", "upper end Y"),
            v("ts", "comma-separated t values (default 1,2,4,8,16)"),
            v("level", "anatomy level of E_t (default 10)"),
            v("band", "band factor (default 2)"),
        ],
    },
    Schema {
        name: "verify-concentration",
        about: "seeded random instances of the concentration lemma",
        params: &[v("count", "number of instances (default 100)")],
    },
    Schema {
        name: "anatomy",
        about: "anatomy count up to x, or divisor sum at M with --m",
        params: &[
            v("x", "real x >= 1"),
            v("m", "integer M (divisor sum mode)"),
            v("t", "prime cutoff"),
            v("c", "level c"),
            WEIGHT,
        ],
    },
    Schema {
        name: "anatomy-improved",
        about: "improved anatomy bound with its hypotheses enforced",
        params: &[
            v("x", "real x >= 1"),
            v("m", "integer M (divisor sum mode)"),
            v("t", "prime cutoff, at least e^e"),
            v("c", "level c > 0"),
            v("eps", "epsilon in (0, 1)"),
            v("threshold", "required value of eps c log t / log log t (default 10)"),
            WEIGHT,
        ],
    },
    Schema {
        name: "second-moment",
        about: "sum of lambda(A_n ∩ A_m) over n, m <= N against Psi(N)^2",
        params: &[v("n", "N"), PSI],
    },
    Schema {
        name: "classify",
        about: "E/F partition of [1, N]^2",
        params: &[
            v("n", "N"),
            PSI,
            v("delta", "delta in (0, 1/2) (default 1/200)"),
            f("pairs", "emit one record per pair"),
        ],
    },
    Schema {
        name: "prop6",
        about: "restricted pair sums against their bound cores",
        params: &[
            v("n", "N"),
            PSI,
            v("variant", "gcd or anatomy (default gcd)"),
            v("s", "scale s"),
            v("eps", "gcd variant: epsilon (default 1/100)"),
            v("t", "anatomy variant: prime cutoff"),
            v("a", "anatomy variant: A"),
            v("eta", "anatomy variant: eta (default 1/10)"),
        ],
    },
    Schema {
        name: "dsgen",
        about: "Duffin–Schaeffer block on the primes in [a, b)",
        params: &[
            v("k", "block index, eps_k = 2^-k"),
            v("p-range", "a:b"),
            v("variant", "full or refined (default full)"),
            f("diagnostics", "measure identities through the interval engine"),
            f("pairs", "emit the family as a pair set"),
            f("diagonal", "with --pairs, include (v, v)"),
        ],
    },
];

pub fn find(name: &str) -> Option<&'static Schema> {
    SCHEMAS.iter().find(|s| s.name == name)
}

pub fn command() -> Command {
    let mut cmd = Command::new("dslab")
        .about("Exact checks for GCD-graph and Duffin–Schaeffer computations")
        .args_override_self(true)
        .subcommand_required(false)
        .arg(Arg::new("config").long("config").global(true).help("key = value file; flags override it"))
        .arg(Arg::new("output").long("output").short('o').global(true).help("write records here instead of stdout"))
        .arg(
            Arg::new("workers")
                .long("workers")
                .global(true)
                .help("worker threads (default: DSLAB_WORKERS, else all cores)"),
        )
        .arg(Arg::new("seed").long("seed").global(true).help("seed for randomized generators (default 0)"))
        .arg(Arg::new("csv").long("csv").global(true).action(ArgAction::SetTrue).help("flatten records to CSV"));
    for s in SCHEMAS {
        let mut sub = Command::new(s.name).about(s.about);
        for p in s.params {
            let mut arg = Arg::new(p.name).long(p.name).help(p.help);
            if p.flag {
                arg = arg.action(ArgAction::SetTrue);
            }
            sub = sub.arg(arg);
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}
