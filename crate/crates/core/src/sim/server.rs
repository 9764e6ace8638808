use rayon::prelude::*;

use crate::espat_b::{CellRegions, KeyB};
use crate::espat_plus::{KeyPlus, MovePublic, PrefixRegions, PublicParams};
use crate::error::FssError;
use crate::group::GroupValue;
use crate::prg::Lambda;

use super::{RegionSet, Scheme, ServerMessage, SimError};

const REPORT_MAGIC: [u8; 4] = *b"ESRP";
const REPORT_VERSION: u8 = 1;
const REPORT_HEADER: usize = 4 + 1 + 1 + 1 + 4 + 8;

#[derive(Debug, Clone)]
enum RegionIndex {
    Cells(CellRegions),
    Prefixes(PrefixRegions),
}

/// One aggregation server. It sees only its own shares and public data.
#[derive(Debug, Clone)]
pub struct Server {
    id: u8,
    lambda: Lambda,
    regions: RegionSet,
    index: RegionIndex,
    acc: Vec<GroupValue>,
    bytes_received: u64,
    bytes_sent: u64,
    ingested: u64,
}

impl Server {
    pub fn new(id: u8, lambda: Lambda, regions: RegionSet) -> Self {
        Server {
            id,
            lambda,
            acc: vec![GroupValue::ZERO; regions.len()],
            index: match &regions {
                RegionSet::Cells(p) => RegionIndex::Cells(CellRegions::new(p)),
                RegionSet::Prefixes(p) => RegionIndex::Prefixes(PrefixRegions::new(p)),
            },
            regions,
            bytes_received: 0,
            bytes_sent: 0,
            ingested: 0,
        }
    }

    pub fn id(&self) -> u8 {
        self.id
    }

    pub fn scheme(&self) -> Scheme {
        self.regions.scheme()
    }

    pub fn regions(&self) -> &RegionSet {
        &self.regions
    }

    pub fn shares(&self) -> &[GroupValue] {
        &self.acc
    }

    pub fn bytes_received(&self) -> u64 {
        self.bytes_received
    }

    pub fn bytes_sent(&self) -> u64 {
        self.bytes_sent
    }

    pub fn ingested(&self) -> u64 {
        self.ingested
    }

    /// This server's share of one message's effect on every region.
    pub fn contribution(&self, msg: &ServerMessage) -> Result<Vec<GroupValue>, SimError> {
        if msg.scheme != self.scheme() {
            return Err(SimError::SchemeMismatch {
                expected: self.scheme(),
                found: msg.scheme,
            });
        }
        match &self.index {
            RegionIndex::Cells(paths) => {
                let mut total = vec![GroupValue::ZERO; paths.len()];
                for share in &msg.shares {
                    let key = KeyB::from_bytes(share)?;
                    self.check_lambda(key.lambda())?;
                    for (t, y) in total.iter_mut().zip(key.eval_indexed(paths)?) {
                        *t += y;
                    }
                }
                Ok(total)
            }
            RegionIndex::Prefixes(prefixes) => {
                let [share] = msg.shares.as_slice() else {
                    return Err(SimError::Malformed("expected one key share"));
                };
                let key = KeyPlus::from_bytes(share)?;
                self.check_lambda(key.lambda())?;
                let public = msg
                    .public
                    .as_deref()
                    .ok_or(SimError::Malformed("missing public parameters"))?;
                match public.get(5) {
                    Some(2) => Ok(key.eval_indexed(&PublicParams::from_bytes(public)?, prefixes)?),
                    Some(3) => Ok(MovePublic::from_bytes(public)?.eval_indexed(&key, prefixes)?),
                    _ => Err(SimError::Malformed("unknown public message")),
                }
            }
        }
    }

    fn check_lambda(&self, lambda: Lambda) -> Result<(), SimError> {
        if lambda == self.lambda {
            Ok(())
        } else {
            Err(FssError::LambdaMismatch.into())
        }
    }

    pub fn ingest(&mut self, msg: &ServerMessage) -> Result<(), SimError> {
        let c = self.contribution(msg)?;
        self.absorb(&c, msg.wire_len() as u64, 1);
        Ok(())
    }

    /// Ingest many messages, evaluating them in parallel. On error nothing
    /// is absorbed.
    pub fn ingest_batch(&mut self, msgs: &[ServerMessage]) -> Result<(), SimError> {
        if msgs.is_empty() {
            return Ok(());
        }
        let zero = || vec![GroupValue::ZERO; self.regions.len()];
        let add = |mut a: Vec<GroupValue>, b: Vec<GroupValue>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        let sum = msgs
            .par_iter()
            .map(|m| self.contribution(m))
            .try_reduce(zero, |a, b| Ok(add(a, b)))?;
        let bytes = msgs.iter().map(|m| m.wire_len() as u64).sum();
        self.absorb(&sum, bytes, msgs.len() as u64);
        Ok(())
    }

    fn absorb(&mut self, c: &[GroupValue], bytes: u64, count: u64) {
        for (a, y) in self.acc.iter_mut().zip(c) {
            *a += *y;
        }
        self.bytes_received += bytes;
        self.ingested += count;
    }

    /// Serialized aggregate shares for the requester.
    pub fn report(&mut self) -> Vec<u8> {
        let r = ServerReport {
            server: self.id,
            scheme: self.scheme(),
            fingerprint: self.regions.fingerprint(),
            shares: self.acc.clone(),
        }
        .to_bytes();
        self.bytes_sent += r.len() as u64;
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerReport {
    pub server: u8,
    pub scheme: Scheme,
    pub fingerprint: u64,
    pub shares: Vec<GroupValue>,
}

impl ServerReport {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(REPORT_HEADER + 8 * self.shares.len());
        out.extend_from_slice(&REPORT_MAGIC);
        out.push(REPORT_VERSION);
        out.push(self.server);
        out.push(self.scheme.tag());
        out.extend_from_slice(&(self.shares.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.fingerprint.to_le_bytes());
        for s in &self.shares {
            out.extend_from_slice(&s.0.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SimError> {
        if bytes.len() < REPORT_HEADER || bytes[..4] != REPORT_MAGIC || bytes[4] != REPORT_VERSION {
            return Err(SimError::Malformed("bad report header"));
        }
        let scheme = Scheme::from_tag(bytes[6]).ok_or(SimError::Malformed("bad scheme tag"))?;
        let n = u32::from_le_bytes(bytes[7..11].try_into().unwrap()) as usize;
        let fingerprint = u64::from_le_bytes(bytes[11..19].try_into().unwrap());
        let body = &bytes[REPORT_HEADER..];
        if body.len() != 8 * n {
            return Err(SimError::Malformed("report length"));
        }
        Ok(ServerReport {
            server: bytes[5],
            scheme,
            fingerprint,
            shares: body
                .chunks_exact(8)
                .map(|c| GroupValue(u64::from_le_bytes(c.try_into().unwrap())))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequesterResult {
    pub counts: Vec<u64>,
    pub total: u64,
}

/// Add the two servers' shares region by region.
pub fn requester_combine(report0: &[u8], report1: &[u8]) -> Result<RequesterResult, SimError> {
    let (a, b) = (ServerReport::from_bytes(report0)?, ServerReport::from_bytes(report1)?);
    if a.scheme != b.scheme
        || a.fingerprint != b.fingerprint
        || a.shares.len() != b.shares.len()
        || a.server == b.server
    {
        return Err(SimError::RegionSetMismatch);
    }
    let counts = a
        .shares
        .iter()
        .zip(&b.shares)
        .enumerate()
        .map(|(region, (x, y))| {
            let v = *x + *y;
            v.as_count().ok_or(SimError::NegativeCount { region, value: v.0 })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RequesterResult {
        total: counts.iter().sum(),
        counts,
    })
}
