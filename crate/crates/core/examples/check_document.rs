//! Runs a small document through the checker and rechecks its JSON report.

use gendiv::cli::{check_text, recheck_text, ParseOptions, RunOptions};

const DOC: &str = "\
field Q = Q
ring A = Q[x, y] / (x*y)
prime pX in A = (x)
prime pY in A = (y)
prime m in A = (x, y)
module M over A = ideal (x, y)
divisor D = M

assert reflexive M
assert sr A 1 at pX pY m
assert not free-rank-one M at m
assert effective D = (x, y)
assert not embedded M
";

fn main() {
    let text = check_text(DOC, &ParseOptions::default(), &RunOptions::default(), false);
    print!("{}", text.stdout);
    let json = check_text(DOC, &ParseOptions::default(), &RunOptions::default(), true);
    let again = recheck_text(&json.stdout);
    print!("{}", again.stdout);
    std::process::exit(again.code);
}
