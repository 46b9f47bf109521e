use clap::Args;
use jmatrix::operators::*;
use jmatrix::recurrences::FamilySpec;

pub const MODEL_TAGS: [&str; 10] = [
    "laguerre-tl",
    "meixner-tm",
    "linpot-laguerre",
    "linpot-ultra",
    "linpot-qultra",
    "linpot-chebu",
    "laguerre-s",
    "meixner-s",
    "asc-l",
    "qhermite",
];

pub const FAMILY_TAGS: [&str; 8] = [
    "laguerre",
    "meixner",
    "meixner-pollaczek",
    "ultraspherical",
    "q-ultraspherical",
    "chebyshev-u",
    "al-salam-chihara",
    "q-inv-hermite",
];

/// Parameter flags shared by every subcommand. Names follow the usual
/// symbols of each family.
#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Scale in `E = xi (x - eta)` for the linear-potential recurrences.
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Extremal-measure parameter for q^{-1}-Hermite; defaults to (1+q)/2.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

fn need(v: Option<f64>, name: &str, tag: &str) -> Result<f64, String> {
    v.ok_or_else(|| format!("model `{tag}` needs --{name}"))
}

impl Params {
    fn a_or_default(&self, q: f64) -> f64 {
        self.a.unwrap_or(0.5 * (1.0 + q))
    }
}

pub fn build_model(tag: &str, p: &Params) -> Result<JacobiOperator, String> {
    let g = |v, name| need(v, name, tag);
    let xi = p.xi.unwrap_or(1.0);
    let eta = p.eta.unwrap_or(0.0);
    let op = match tag {
        "laguerre-tl" => build_laguerre_tl(g(p.alpha, "alpha")?),
        "meixner-tm" => build_meixner_tm(g(p.beta, "beta")?, g(p.c, "c")?),
        "linpot-laguerre" | "linpot-ultra" | "linpot-qultra" => {
            let gamma = g(p.gamma, "gamma")?;
            let fam = match tag {
                "linpot-laguerre" => FamilySpec::laguerre(g(p.alpha, "alpha")?),
                "linpot-ultra" => FamilySpec::ultraspherical(g(p.nu, "nu")?),
                _ => FamilySpec::q_ultraspherical(g(p.beta, "beta")?, g(p.q, "q")?),
            };
            fam.and_then(|f| build_linear_potential(f, gamma, xi, eta))
        }
        "linpot-chebu" => build_linear_potential(FamilySpec::chebyshev_u(), g(p.gamma, "gamma")?, xi, eta),
        // integer gamma >= 0 splits the matrix; the blocks are reported, not rejected
        "laguerre-s" => build_laguerre_s_unchecked(g(p.alpha, "alpha")?, g(p.gamma, "gamma")?),
        "meixner-s" => build_meixner_s(g(p.beta, "beta")?, g(p.c, "c")?, g(p.gamma, "gamma")?),
        "asc-l" => build_asc_l(g(p.t1, "t1")?, g(p.t2, "t2")?, g(p.q, "q")?),
        "qhermite" => {
            let q = g(p.q, "q")?;
            build_qhermite_potential(q, g(p.gamma, "gamma")?, p.a_or_default(q))
        }
        _ => return Err(format!("unknown model `{tag}`; expected one of {}", MODEL_TAGS.join(", "))),
    };
    op.map_err(|e| e.to_string())
}

pub fn build_family(tag: &str, p: &Params) -> Result<FamilySpec, String> {
    let g = |v, name| need(v, name, tag);
    let f = match tag {
        "laguerre" => FamilySpec::laguerre(g(p.alpha, "alpha")?),
        "meixner" => FamilySpec::meixner(g(p.beta, "beta")?, g(p.c, "c")?),
        "meixner-pollaczek" => FamilySpec::meixner_pollaczek(g(p.lambda, "lambda")?, g(p.phi, "phi")?),
        "ultraspherical" => FamilySpec::ultraspherical(g(p.nu, "nu")?),
        "q-ultraspherical" => FamilySpec::q_ultraspherical(g(p.beta, "beta")?, g(p.q, "q")?),
        "chebyshev-u" => Ok(FamilySpec::chebyshev_u()),
        "al-salam-chihara" => FamilySpec::al_salam_chihara(g(p.t1, "t1")?, g(p.t2, "t2")?, g(p.q, "q")?),
        "q-inv-hermite" => {
            let q = g(p.q, "q")?;
            FamilySpec::q_inv_hermite(q, p.a_or_default(q))
        }
        _ => return Err(format!("unknown family `{tag}`; expected one of {}", FAMILY_TAGS.join(", "))),
    };
    f.map_err(|e| e.to_string())
}
