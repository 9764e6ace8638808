use rand::{CryptoRng, RngCore};

use crate::espat_b::{gen_update_b, keygen_b};
use crate::espat_plus::{keygen_plus, move_gen, PayloadSchedule};
use crate::group::GroupValue;
use crate::spatial::{KdPrefix, SpatialPoint};

use super::{Deployment, PpDelivery, Scheme, SimError};

/// Everything one client sends for one insertion or move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientSubmission {
    pub client_id: String,
    pub scheme: Scheme,
    pub is_update: bool,
    /// Serialized key shares per server.
    pub shares: [Vec<Vec<u8>>; 2],
    /// eSpat+ public parameters or move words, identical for both servers.
    pub public: Option<Vec<u8>>,
}

/// The part of a submission one server receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerMessage {
    pub scheme: Scheme,
    pub shares: Vec<Vec<u8>>,
    pub public: Option<Vec<u8>>,
}

impl ServerMessage {
    pub fn wire_len(&self) -> usize {
        self.shares.iter().map(Vec::len).sum::<usize>() + self.public.as_ref().map_or(0, Vec::len)
    }
}

impl ClientSubmission {
    pub fn share_bytes(&self, server: usize) -> usize {
        self.shares[server].iter().map(Vec::len).sum()
    }

    pub fn public_bytes(&self) -> usize {
        self.public.as_ref().map_or(0, Vec::len)
    }

    /// Bytes leaving the client: both shares plus one or two copies of the
    /// public part depending on delivery.
    pub fn upload_bytes(&self, delivery: PpDelivery) -> usize {
        let copies = match delivery {
            PpDelivery::PerServer => 2,
            PpDelivery::Broadcast => 1,
        };
        self.share_bytes(0) + self.share_bytes(1) + copies * self.public_bytes()
    }

    pub fn for_server(&self, server: usize) -> ServerMessage {
        ServerMessage {
            scheme: self.scheme,
            shares: self.shares[server].clone(),
            public: self.public.clone(),
        }
    }

    pub(crate) fn event(&self) -> &'static str {
        if self.is_update {
            "update"
        } else {
            "submit"
        }
    }
}

/// Key a single point with payload +1.
pub fn client_submit<R: RngCore + CryptoRng + ?Sized>(
    dep: &Deployment,
    scheme: Scheme,
    p: &SpatialPoint,
    rng: &mut R,
) -> Result<ClientSubmission, SimError> {
    let (shares, public) = match scheme {
        Scheme::B => {
            let (k0, k1) = keygen_b(dep.lambda, &dep.encode_b(p)?, GroupValue::ONE, rng)?;
            ([vec![k0.to_bytes()], vec![k1.to_bytes()]], None)
        }
        Scheme::Plus => {
            let target = dep.encode_plus(p)?;
            let keys = keygen_plus(dep.lambda, &target, &PayloadSchedule::ones(target.len()), rng)?;
            (
                [vec![keys.keys.0.to_bytes()], vec![keys.keys.1.to_bytes()]],
                Some(keys.pp.to_bytes()),
            )
        }
    };
    Ok(ClientSubmission {
        client_id: p.client_id.clone(),
        scheme,
        is_update: false,
        shares,
        public,
    })
}

/// Move a previously submitted point. eSpat-B sends a cancel key and an
/// insert key; eSpat+ sends one move bundle split at the deepest common prefix.
pub fn apply_update<R: RngCore + CryptoRng + ?Sized>(
    dep: &Deployment,
    scheme: Scheme,
    old: &SpatialPoint,
    new: &SpatialPoint,
    rng: &mut R,
) -> Result<ClientSubmission, SimError> {
    let (shares, public) = match scheme {
        Scheme::B => {
            let up = gen_update_b(dep.lambda, &dep.encode_b(old)?, &dep.encode_b(new)?, rng)?;
            let keys = |b: bool| up.party_keys(b).map(|k| k.to_bytes()).to_vec();
            ([keys(false), keys(true)], None)
        }
        Scheme::Plus => {
            let (a, b) = (dep.encode_plus(old)?, dep.encode_plus(new)?);
            // Same leaf: split one level early so the tails cancel.
            let m = a.common_len(&b).min(a.len() - 1);
            let tail = |p: &KdPrefix| KdPrefix::new(p.bits()[m..].to_vec());
            let bundle = move_gen(dep.lambda, &a.prefix(m), &tail(&a), &tail(&b), rng)?;
            (
                [vec![bundle.keys.0.to_bytes()], vec![bundle.keys.1.to_bytes()]],
                Some(bundle.public.to_bytes()),
            )
        }
    };
    Ok(ClientSubmission {
        client_id: new.client_id.clone(),
        scheme,
        is_update: true,
        shares,
        public,
    })
}
