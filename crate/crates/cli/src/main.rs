fn main() {
    println!("limsym");
}
