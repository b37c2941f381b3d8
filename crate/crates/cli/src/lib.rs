// SPDX-License-Identifier: Apache-2.0

//! Command-line front ends for LZJD digests.
//!
//! `lzjd` follows sdhash's flag conventions: hash files to digest lines,
//! `-g` to hash and compare everything, `-c` to compare digest databases.
//! `lzjd-eval` runs the evaluation harness.

pub mod eval_cmd;
pub mod hash_cmd;

/// Successful run.
pub const EXIT_OK: i32 = 0;
/// At least one input could not be processed, or digests were incompatible.
pub const EXIT_FAILURE: i32 = 1;
/// Bad arguments or an unparseable digest database.
pub const EXIT_USAGE: i32 = 2;
