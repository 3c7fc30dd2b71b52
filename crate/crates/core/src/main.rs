fn main() {
    coalgtop::cli_placeholder();
}
