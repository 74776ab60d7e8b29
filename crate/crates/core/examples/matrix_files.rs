//! Reading and writing the plain-text matrix format.

use oblique::cli::matfile::{format_matrix, natural_field, parse_matrix_str};

fn main() {
    let text = "# a Hermitian weight\ncomplex 2 2\n2,0 0,1\n0,-1 2,0\n";
    let file = parse_matrix_str(text).expect("valid file");
    println!("field {:?}, shape {:?}", file.field, file.matrix.shape());
    print!("{}", format_matrix(&file.matrix, natural_field(&file.matrix)));

    match parse_matrix_str("real 2 2\n1 2\n3 x\n") {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("error: {e}"),
    }
}
