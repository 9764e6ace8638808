use std::fmt;

use super::{ClientSubmission, PpDelivery, Scheme};

/// Byte counters per channel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Accounting {
    pub client_to_server: [u64; 2],
    pub client_to_board: u64,
    pub board_to_server: [u64; 2],
    pub server_to_requester: [u64; 2],
    pub submissions: u64,
    pub updates: u64,
}

impl Accounting {
    pub(crate) fn record_submission(&mut self, sub: &ClientSubmission, delivery: PpDelivery) {
        let public = sub.public_bytes() as u64;
        for b in 0..2 {
            self.client_to_server[b] += sub.share_bytes(b) as u64;
            match delivery {
                PpDelivery::PerServer => self.client_to_server[b] += public,
                PpDelivery::Broadcast => self.board_to_server[b] += public,
            }
        }
        if delivery == PpDelivery::Broadcast {
            self.client_to_board += public;
        }
        if sub.is_update {
            self.updates += 1;
        } else {
            self.submissions += 1;
        }
    }

    pub fn client_sent(&self) -> u64 {
        self.client_to_server.iter().sum::<u64>() + self.client_to_board
    }

    /// Mean client upload per message, or zero before any traffic.
    pub fn per_client_upload(&self) -> f64 {
        let n = self.submissions + self.updates;
        if n == 0 {
            0.0
        } else {
            self.client_sent() as f64 / n as f64
        }
    }

    pub fn rows(&self, scheme: Scheme, depth: usize) -> Vec<CommRow> {
        let row = |role: &'static str, bytes: u64| CommRow {
            scheme,
            depth,
            role,
            bytes,
        };
        vec![
            row("client->server0", self.client_to_server[0]),
            row("client->server1", self.client_to_server[1]),
            row("client->board", self.client_to_board),
            row("board->server0", self.board_to_server[0]),
            row("board->server1", self.board_to_server[1]),
            row("server0->requester", self.server_to_requester[0]),
            row("server1->requester", self.server_to_requester[1]),
        ]
    }

    pub fn to_csv(&self, scheme: Scheme, depth: usize) -> String {
        let mut out = String::from(CommRow::CSV_HEADER);
        out.push('\n');
        for r in self.rows(scheme, depth) {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommRow {
    pub scheme: Scheme,
    pub depth: usize,
    pub role: &'static str,
    pub bytes: u64,
}

impl CommRow {
    pub const CSV_HEADER: &'static str = "scheme,depth,role,bytes";
}

impl fmt::Display for CommRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.scheme, self.depth, self.role, self.bytes)
    }
}

/// One audit line: event, role, bytes and the number of regions touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub event: &'static str,
    pub role: String,
    pub bytes: u64,
    pub regions: usize,
}

impl TranscriptEntry {
    pub(crate) fn new(event: &'static str, role: String, bytes: u64, regions: usize) -> Self {
        TranscriptEntry {
            event,
            role,
            bytes,
            regions,
        }
    }
}

impl fmt::Display for TranscriptEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.event, self.role, self.bytes, self.regions)
    }
}
