use chainring_core::chain::ChainRing;
use chainring_core::field::DEFAULT_FIELD_CAP;
use chainring_core::text::parse_chain_element;
use chainring_core::{Error, FieldContext, ModulusKind, RingContext};
use clap::{Args, ValueEnum};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Kind {
    Constacyclic,
    QuadraticTrace,
}

/// Parameters of one quotient ring.
#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// One scalar per power of u, e.g. `1,0,1` or `[0,1],1`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, value_enum, default_value_t = Kind::Constacyclic)]
    pub kind: Kind,
    /// Monic field modulus as coefficients from the constant term, leading 1 included.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

impl RingArgs {
    pub fn build(&self) -> Result<Arc<RingContext>, Error> {
        build_ring(
            self.p,
            self.m,
            self.s,
            self.t,
            self.kind,
            self.n,
            &self.delta,
            self.modulus.as_deref(),
        )
    }
}

#[allow(clippy::too_many_arguments)]
pub fn build_ring(
    p: u32,
    m: u32,
    s: u32,
    t: usize,
    kind: Kind,
    n: usize,
    delta: &str,
    modulus: Option<&[u32]>,
) -> Result<Arc<RingContext>, Error> {
    let field = Arc::new(FieldContext::with_modulus(p, m, modulus, DEFAULT_FIELD_CAP)?);
    let chain = ChainRing::new(field.clone(), t)?;
    let delta = parse_chain_element(&chain, delta)?;
    let kind = match kind {
        Kind::Constacyclic => ModulusKind::Constacyclic { n, delta },
        Kind::QuadraticTrace => ModulusKind::QuadraticTrace { delta },
    };
    RingContext::new(field, s, t, kind)
}
