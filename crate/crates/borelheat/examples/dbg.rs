fn main() {
    // green ratio investigation
    for (z, sp) in [(1.0, 0.3)] {
        for g in [500usize, 1000, 2000, 4000] {
            let r = borelheat::defmatrix::green_residual(
                borelheat::C64::new(z, 0.0), sp, g).unwrap();
            println!("grid {g}: interior {:e} jump {:e}", r.max_interior_residual, r.jump_error);
        }
    }
    let e = borelheat::defmatrix::estimate_td(borelheat::C64::new(1.0, 0.0), 6, 2000, 42).unwrap();
    println!("td(omega=1) = {} ceiling {} hit {}", e.t_d, e.ceiling, e.hit_ceiling);
    let e2 = borelheat::defmatrix::estimate_td(borelheat::C64::new(0.0, 2.0), 6, 2000, 7).unwrap();
    println!("td(omega=2i) = {} ceiling {}", e2.t_d, e2.ceiling);
}
