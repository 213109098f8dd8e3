fn main() {
    let mut rng = survgen::RngStream::new(1, 0);
    println!("u64_0 = {}", rng.next_u64());
    println!("u64_1 = {}", rng.next_u64());
    let mut rng = survgen::RngStream::new(1, 0);
    println!("uniform_0 = {:?}", rng.uniform());
}
