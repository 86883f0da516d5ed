use fricke::excision;
use fricke::fricke::{build_group, FrickeTriple};
use fricke::scalar::Scalar;
use std::time::Instant;
fn main() {
    let g = build_group(FrickeTriple::modular()).unwrap();
    let t = Instant::now();
    let mut n = 0usize;
    fricke::tree::visit(&g, 15, &mut |_| n += 1).unwrap();
    println!("matrix DFS: {:?} ({n} nodes)", t.elapsed());
    let t = Instant::now();
    let mut n2 = 0usize;
    fricke::tree::visit_heights(&g, 15, &mut |_, _, _, _| n2 += 1);
    println!("height DFS: {:?} ({n2} nodes)", t.elapsed());
    let t = Instant::now();
    let cover = excision::build_excision(&g, 15).unwrap();
    println!("build_excision: {:?} ({} pieces)", t.elapsed(), cover.excised.len());
    let t = Instant::now();
    let l = excision::remaining_length(&cover);
    println!("remaining_length: {:?} = {}", t.elapsed(), l.to_f64());
    let t = Instant::now();
    let s = excision::mcshane_partial_sum(&g, 15).unwrap();
    println!("mcshane (memo): {:?} = {}", t.elapsed(), s.to_f64());
    let tol = Scalar::float_from_decimal("3e-6", 256).unwrap();
    let t = Instant::now();
    let rows = excision::depth_table(&g, 15, &tol).unwrap();
    println!("depth_table: {:?} (L15 = {})", t.elapsed(), rows[15].remaining_len.to_f64());
}
