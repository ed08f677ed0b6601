//! JSON listing of a schedule: an array of transmissions, coded ones first,
//! then unicast rounds.

use cc_sched::placement::{MiniFileId, SubpacketId};
use cc_sched::schedule::{Codeword, TransmissionId, UcEntry, UcRound};
use cc_sched::{ProfileSet, Schedule, Transmission, UserId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cc,
    Uc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireCodeword {
    pub recipient: u32,
    pub file: u32,
    pub profiles: ProfileSet,
    pub q: u32,
    pub nullset: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireTransmission {
    pub kind: Kind,
    /// `(r,c,l)` or `(r,c,l,m,s)` for coded transmissions, the 1-based round
    /// number for unicast rounds.
    pub id: Vec<usize>,
    pub codewords: Vec<WireCodeword>,
}

#[derive(Debug, Error)]
pub enum WireError {
    #[error("malformed schedule: {0}")]
    Json(#[from] serde_json::Error),
    #[error("coded transmission id must have 3 or 5 entries, got {0:?}")]
    BadId(Vec<usize>),
}

fn codeword(recipient: UserId, sp: SubpacketId, nullset: impl IntoIterator<Item = UserId>) -> WireCodeword {
    WireCodeword {
        recipient: recipient.0,
        file: sp.mini.file,
        profiles: sp.mini.profiles,
        q: sp.q,
        nullset: nullset.into_iter().map(|u| u.0).collect(),
    }
}

pub fn to_wire(schedule: &Schedule) -> Vec<WireTransmission> {
    let cc = schedule.cc.iter().map(|t| WireTransmission {
        kind: Kind::Cc,
        id: t.id.as_vec(),
        codewords: t.codewords.iter().map(|c| codeword(c.recipient, c.subpacket, c.nullset.iter().copied())).collect(),
    });
    let uc = schedule.uc.iter().enumerate().map(|(i, round)| WireTransmission {
        kind: Kind::Uc,
        id: vec![i + 1],
        codewords: round
            .entries
            .iter()
            .map(|e| {
                let others = round.entries.iter().map(|o| o.recipient).filter(|&u| u != e.recipient);
                codeword(e.recipient, e.subpacket, others)
            })
            .collect(),
    });
    cc.chain(uc).collect()
}

fn subpacket(c: &WireCodeword) -> SubpacketId {
    SubpacketId { mini: MiniFileId { file: c.file, profiles: c.profiles }, q: c.q }
}

pub fn from_wire(items: &[WireTransmission]) -> Result<Schedule, WireError> {
    let mut schedule = Schedule::default();
    for item in items {
        match item.kind {
            Kind::Cc => {
                let id = match item.id[..] {
                    [r, c, l] => TransmissionId::Triple { r, c, l },
                    [r, c, l, m, s] => TransmissionId::Quintuple { r, c, l, m, s },
                    _ => return Err(WireError::BadId(item.id.clone())),
                };
                let codewords = item
                    .codewords
                    .iter()
                    .map(|c| Codeword {
                        recipient: UserId(c.recipient),
                        subpacket: subpacket(c),
                        nullset: c.nullset.iter().copied().map(UserId).collect(),
                    })
                    .collect();
                schedule.cc.push(Transmission { id, codewords });
            }
            Kind::Uc => {
                let entries: Vec<UcEntry> = item
                    .codewords
                    .iter()
                    .map(|c| UcEntry { recipient: UserId(c.recipient), subpacket: subpacket(c) })
                    .collect();
                schedule.uc.push(UcRound { capacity: entries.len(), entries });
            }
        }
    }
    Ok(schedule)
}

pub fn parse_schedule(text: &str) -> Result<Schedule, WireError> {
    let items: Vec<WireTransmission> = serde_json::from_str(text)?;
    from_wire(&items)
}
