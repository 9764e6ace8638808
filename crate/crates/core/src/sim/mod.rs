//! In-process simulation of clients, two non-colluding servers and a
//! requester. Parties exchange serialized byte buffers only.

mod accounting;
mod client;
mod deploy;
mod region;
mod server;

pub use accounting::{Accounting, CommRow, TranscriptEntry};
pub use client::{apply_update, client_submit, ClientSubmission, ServerMessage};
pub use deploy::{Deployment, PpDelivery};
pub use region::{cover_queries, decompose_region, plan_queries, QueryPlan, RegionQuery, RegionSet};
pub use server::{requester_combine, RequesterResult, Server, ServerReport};

use std::fmt;

use rand::{CryptoRng, RngCore};

use crate::codec::{CodecError, HEADER_LEN};
use crate::error::FssError;
use crate::spatial::{EncodeError, SpatialPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    B,
    Plus,
}

impl Scheme {
    pub fn tag(self) -> u8 {
        match self {
            Scheme::B => 0,
            Scheme::Plus => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Scheme> {
        match tag {
            0 => Some(Scheme::B),
            1 => Some(Scheme::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::B => "espat-b",
            Scheme::Plus => "espat-plus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("server expects {expected} messages, got {found}")]
    SchemeMismatch { expected: Scheme, found: Scheme },
    #[error("server reports cover different region sets")]
    RegionSetMismatch,
    #[error("region {region} combined to {value:#x}, which is not a count")]
    NegativeCount { region: usize, value: u64 },
    #[error("query box is not a union of cover regions: {0}")]
    UnalignedBox(String),
    #[error("malformed message: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Fss(#[from] FssError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Two servers with a fixed region set, fed through per-server queues.
pub struct Simulation {
    deployment: Deployment,
    scheme: Scheme,
    servers: [Server; 2],
    queues: [Vec<ServerMessage>; 2],
    accounting: Accounting,
    transcript: Vec<TranscriptEntry>,
    corrupt_next: bool,
}

impl Simulation {
    pub fn new(deployment: Deployment, scheme: Scheme, regions: RegionSet) -> Result<Self, SimError> {
        if regions.scheme() != scheme {
            return Err(SimError::SchemeMismatch {
                expected: scheme,
                found: regions.scheme(),
            });
        }
        Ok(Simulation {
            servers: [
                Server::new(0, deployment.lambda, regions.clone()),
                Server::new(1, deployment.lambda, regions),
            ],
            deployment,
            scheme,
            queues: Default::default(),
            accounting: Accounting::default(),
            transcript: Vec::new(),
            corrupt_next: false,
        })
    }

    pub fn deployment(&self) -> &Deployment {
        &self.deployment
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn server(&self, id: usize) -> &Server {
        &self.servers[id]
    }

    pub fn accounting(&self) -> &Accounting {
        &self.accounting
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    /// Test hook: flip one seed bit in server 1's copy of the next submission.
    pub fn corrupt_next_share(&mut self) {
        self.corrupt_next = true;
    }

    /// Encode, key and deliver one point.
    pub fn submit_point<R: RngCore + CryptoRng + ?Sized>(
        &mut self,
        p: &SpatialPoint,
        rng: &mut R,
    ) -> Result<(), SimError> {
        let sub = client_submit(&self.deployment, self.scheme, p, rng)?;
        self.deliver(&sub);
        Ok(())
    }

    pub fn move_point<R: RngCore + CryptoRng + ?Sized>(
        &mut self,
        old: &SpatialPoint,
        new: &SpatialPoint,
        rng: &mut R,
    ) -> Result<(), SimError> {
        let sub = apply_update(&self.deployment, self.scheme, old, new, rng)?;
        self.deliver(&sub);
        Ok(())
    }

    /// Queue a submission for both servers and account for its bytes.
    pub fn deliver(&mut self, sub: &ClientSubmission) {
        let regions = self.servers[0].regions().len();
        let mut msgs = [sub.for_server(0), sub.for_server(1)];
        if std::mem::take(&mut self.corrupt_next) {
            if let Some(share) = msgs[1].shares.first_mut() {
                share[HEADER_LEN] ^= 1;
            }
        }
        let delivery = self.deployment.pp_delivery;
        self.accounting.record_submission(sub, delivery);
        self.transcript.push(TranscriptEntry::new(
            sub.event(),
            format!("client:{}", sub.client_id),
            sub.upload_bytes(delivery) as u64,
            0,
        ));
        for (b, msg) in msgs.into_iter().enumerate() {
            self.transcript.push(TranscriptEntry::new(
                "receive",
                format!("server{b}"),
                msg.wire_len() as u64,
                regions,
            ));
            self.queues[b].push(msg);
        }
    }

    /// Let both servers drain their queues, each in its own context.
    pub fn flush(&mut self) -> Result<(), SimError> {
        let [q0, q1] = &mut self.queues;
        let [s0, s1] = &mut self.servers;
        let (r0, r1) = rayon::join(
            || s0.ingest_batch(&std::mem::take(q0)),
            || s1.ingest_batch(&std::mem::take(q1)),
        );
        r0.and(r1)
    }

    /// Collect both reports and combine them as the requester.
    pub fn finish(&mut self) -> Result<RequesterResult, SimError> {
        self.flush()?;
        let regions = self.servers[0].regions().len();
        let reports = [self.servers[0].report(), self.servers[1].report()];
        for (b, r) in reports.iter().enumerate() {
            self.accounting.server_to_requester[b] += r.len() as u64;
            self.transcript.push(TranscriptEntry::new(
                "report",
                format!("server{b}"),
                r.len() as u64,
                regions,
            ));
        }
        requester_combine(&reports[0], &reports[1])
    }
}
