//! Proof surgery and the construction of initial proofs.

mod embed;
mod graft;
mod surgery;
mod taut;

pub use surgery::{dedup_tree, drop_false_in, drop_false_literal, invert, invert_at, replacement, weaken, weaken_node, Inversion};
pub use taut::taut_proof;
pub use graft::{drop_all, graft, tail_len};
pub(crate) use graft::move_to_end;
pub(crate) use surgery::weaken_in;
pub use embed::{assemble, embed, leaf_piece, parse_skeleton, wrap, LeafKind, LeafSpec, Skeleton};
