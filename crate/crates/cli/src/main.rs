// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(lzjd_cli::hash_cmd::main_with_args(std::env::args_os()));
}
