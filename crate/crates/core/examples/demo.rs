//! Prints the compiled system and witness for `z1 - 2` over `Z wr Z`.

use wreathkit::equations::{serialize_assignment, serialize_system};
use wreathkit::reduction::compile;
use wreathkit::{GroupSpec, IntPolynomial};

fn main() {
    let f = IntPolynomial::parse("z1 - 2", 0).unwrap();
    let out = compile(&f, GroupSpec::new(1, 1).unwrap());
    print!("{}", serialize_system(&out.system));
    println!("---");
    print!("{}", serialize_assignment(&out.witness(&[2]).unwrap()));
}
