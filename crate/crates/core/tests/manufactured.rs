mod common;

#[test]
fn p2_converges_at_third_order_in_l2() {
    let errors = common::mms_errors(300);
    for (w, order) in errors.windows(2).zip(common::orders(&errors)) {
        println!(
            "h {:.4} -> {:.4}: error {:.3e} -> {:.3e}, order {order:.2}",
            w[0].0, w[1].0, w[0].1, w[1].1
        );
        assert!(order >= 2.5, "observed order {order:.2}");
    }
    assert!(errors[2].1 < 1e-4);
}
