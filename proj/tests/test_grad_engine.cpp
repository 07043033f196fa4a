#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "parafine/checkpoint.hpp"
#include "parafine/grad_check.hpp"
#include "parafine/ops.hpp"
#include "parafine/optim.hpp"
#include "parafine/rng.hpp"

using namespace parafine;

namespace {

Tensor random_tensor(Shape shape, Rng& rng, bool requires_grad = true) {
    std::vector<Real> data(shape_numel(shape));
    for (auto& v : data) v = rng.normal();
    return Tensor::from(std::move(shape), std::move(data), requires_grad);
}

// Points for ops with a kink at zero: keep every coordinate clear of it so
// central differences stay valid.
Tensor random_tensor_away_from_zero(Shape shape, Rng& rng, Real margin) {
    Tensor t = random_tensor(std::move(shape), rng);
    for (auto& v : t.mutable_data()) {
        if (std::abs(v) < margin) v = v < 0.0 ? v - margin : v + margin;
    }
    return t;
}

std::vector<Real> grad_of(const Tensor& t) {
    if (t.grad().empty()) return std::vector<Real>(t.numel(), 0.0);
    return {t.grad().begin(), t.grad().end()};
}

}  // namespace

TEST_CASE("tensor rejects data not matching its shape") {
    CHECK_THROWS_AS(Tensor::from({2, 3}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("rank-1 tensors act as a single row") {
    Tensor t = Tensor::from({4}, {1.0, 2.0, 3.0, 4.0});
    CHECK(t.rows() == 1);
    CHECK(t.cols() == 4);
}

TEST_CASE("matmul matches a hand-computed fixture") {
    Tensor a = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor b = Tensor::from({3, 2}, {7, 8, 9, 10, 11, 12});
    Tensor c = matmul(a, b);
    CHECK(c.shape() == Shape{2, 2});
    CHECK(c.at(0, 0) == doctest::Approx(58.0));
    CHECK(c.at(0, 1) == doctest::Approx(64.0));
    CHECK(c.at(1, 0) == doctest::Approx(139.0));
    CHECK(c.at(1, 1) == doctest::Approx(154.0));
}

TEST_CASE("softmax of a constant row is uniform") {
    Tensor y = softmax_rows(Tensor::from({2}, {0.0, 0.0}));
    CHECK(y.data()[0] == doctest::Approx(0.5));
    CHECK(y.data()[1] == doctest::Approx(0.5));
}

TEST_CASE("cross-entropy of uniform logits is ln V") {
    for (const int v : {2, 5, 17}) {
        Tensor logits = Tensor::zeros({3, v});
        Tensor loss = cross_entropy_rows(logits, {0, v / 2, v - 1});
        CHECK(loss.item() == doctest::Approx(std::log(static_cast<Real>(v))).epsilon(1e-12));
    }
}

TEST_CASE("backward of x squared at 3 gives 6") {
    Tensor x = Tensor::scalar(3.0, true);
    Tensor loss = sum_all(mul(x, x));
    backward(loss);
    CHECK(x.grad()[0] == doctest::Approx(6.0));
}

TEST_CASE("loss not touching a leaf leaves its gradient zero") {
    Tensor x = Tensor::scalar(3.0, true);
    Tensor y = Tensor::scalar(2.0, true);
    backward(sum_all(mul(y, y)));
    CHECK(grad_of(x) == std::vector<Real>{0.0});
}

TEST_CASE("backward rejects a non-scalar loss") {
    Tensor x = Tensor::from({2}, {1.0, 2.0}, true);
    CHECK_THROWS_AS(backward(mul(x, x)), std::invalid_argument);
}

TEST_CASE("shape mismatch diagnostics name the op") {
    Tensor a = Tensor::zeros({2, 3});
    Tensor b = Tensor::zeros({2, 3});
    try {
        matmul(a, b);
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("matmul") != std::string::npos);
        CHECK(msg.find("[2x3]") != std::string::npos);
    }
}

TEST_CASE("quadratic form gradient is exact to 1e-6") {
    Rng rng(100);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor q = random_tensor({4, 4}, rng, false);
        auto fn = [&](const Tensor& x) {
            return sum_all(mul(x, matmul(x, q)));
        };
        auto report = grad_check(fn, random_tensor({1, 4}, rng, false), 1e-5);
        CHECK(report.ok(1e-6));
    }
}

TEST_CASE("zero function reports zero error") {
    auto fn = [](const Tensor& x) { return scale(sum_all(x), 0.0); };
    auto report = grad_check(fn, Tensor::from({3}, {1.0, 2.0, 3.0}), 1e-5);
    CHECK(report.finite);
    CHECK(report.max_rel_error == 0.0);
}

TEST_CASE("every primitive passes gradient checking at 10 random points") {
    Rng rng(2024);
    const Real eps = 1e-5;
    const Real tol = 1e-3;

    struct Case {
        const char* name;
        std::function<GradCheckReport(Rng&)> run;
    };
    std::vector<Case> cases;

    cases.push_back({"matmul", [&](Rng& r) {
        Tensor b = random_tensor({3, 4}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(matmul(x, b)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"matmul-rhs", [&](Rng& r) {
        Tensor a = random_tensor({2, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(matmul(a, x)); },
                          random_tensor({3, 4}, r, false), eps);
    }});
    cases.push_back({"add", [&](Rng& r) {
        Tensor b = random_tensor({2, 3}, r, false);
        Tensor w = random_tensor({2, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(add(x, b), w)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"add-broadcast", [&](Rng& r) {
        Tensor a = random_tensor({4, 3}, r, false);
        Tensor w = random_tensor({4, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(add(a, x), w)); },
                          random_tensor({3}, r, false), eps);
    }});
    cases.push_back({"sub", [&](Rng& r) {
        Tensor b = random_tensor({2, 3}, r, false);
        Tensor w = random_tensor({2, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(sub(x, b), w)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"mul", [&](Rng& r) {
        Tensor b = random_tensor({2, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(mul(x, b), x)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"mul-broadcast", [&](Rng& r) {
        Tensor a = random_tensor({4, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(a, x)); },
                          random_tensor({3}, r, false), eps);
    }});
    cases.push_back({"scale", [&](Rng& r) {
        return grad_check([&](const Tensor& x) { return sum_all(scale(mul(x, x), -1.7)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"transpose", [&](Rng& r) {
        Tensor w = random_tensor({3, 2}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(transpose(x), w)); },
                          random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"relu", [&](Rng& r) {
        Tensor w = random_tensor({2, 5}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(relu(x), w)); },
                          random_tensor_away_from_zero({2, 5}, r, 0.05), eps);
    }});
    cases.push_back({"softmax", [&](Rng& r) {
        Tensor w = random_tensor({3, 5}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(softmax_rows(x), w)); },
                          random_tensor({3, 5}, r, false), eps);
    }});
    cases.push_back({"layer-norm", [&](Rng& r) {
        Tensor w = random_tensor({3, 6}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(layer_norm_rows(x), w)); },
                          random_tensor({3, 6}, r, false), eps);
    }});
    cases.push_back({"embedding", [&](Rng& r) {
        const std::vector<int> ids = {0, 2, 1, 2};
        Tensor w = random_tensor({4, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(embedding_rows(x, ids), w)); },
                          random_tensor({3, 3}, r, false), eps);
    }});
    cases.push_back({"cross-entropy", [&](Rng& r) {
        const std::vector<int> targets = {1, 0, 3};
        return grad_check(
            [&](const Tensor& x) { return cross_entropy_rows(x, targets); },
            random_tensor({3, 4}, r, false), eps);
    }});
    cases.push_back({"mse", [&](Rng& r) {
        Tensor b = random_tensor({2, 4}, r, false);
        return grad_check([&](const Tensor& x) { return mse(x, b); },
                          random_tensor({2, 4}, r, false), eps);
    }});
    cases.push_back({"concat-rows", [&](Rng& r) {
        Tensor b = random_tensor({2, 3}, r, false);
        Tensor w = random_tensor({4, 3}, r, false);
        return grad_check(
            [&](const Tensor& x) { return sum_all(mul(concat_rows({x, b}), w)); },
            random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"concat-cols", [&](Rng& r) {
        Tensor b = random_tensor({2, 2}, r, false);
        Tensor w = random_tensor({2, 5}, r, false);
        return grad_check(
            [&](const Tensor& x) { return sum_all(mul(concat_cols({x, b}), w)); },
            random_tensor({2, 3}, r, false), eps);
    }});
    cases.push_back({"slice-rows", [&](Rng& r) {
        Tensor w = random_tensor({2, 3}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(slice_rows(x, 1, 3), w)); },
                          random_tensor({4, 3}, r, false), eps);
    }});
    cases.push_back({"slice-cols", [&](Rng& r) {
        Tensor w = random_tensor({3, 2}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(slice_cols(x, 1, 3), w)); },
                          random_tensor({3, 4}, r, false), eps);
    }});
    cases.push_back({"mean-rows", [&](Rng& r) {
        Tensor w = random_tensor({4}, r, false);
        return grad_check([&](const Tensor& x) { return sum_all(mul(mean_rows(x), w)); },
                          random_tensor({3, 4}, r, false), eps);
    }});
    cases.push_back({"sum", [&](Rng& r) {
        return grad_check([&](const Tensor& x) { return sum_all(mul(x, x)); },
                          random_tensor({2, 3}, r, false), eps);
    }});

    for (const auto& c : cases) {
        CAPTURE(c.name);
        for (int point = 0; point < 10; ++point) {
            auto report = c.run(rng);
            CAPTURE(report.max_rel_error);
            CAPTURE(report.detail);
            CHECK(report.ok(tol));
        }
    }
}

TEST_CASE("gradient of a sum of losses is the sum of gradients") {
    Rng rng(55);
    Tensor a = random_tensor({3, 3}, rng, false);
    Tensor b = random_tensor({3, 3}, rng, false);

    auto grads_for = [&](bool first, bool second) {
        Rng local(7);
        Tensor x = random_tensor({3, 3}, local);
        std::vector<Tensor> losses;
        if (first) losses.push_back(mse(x, a));
        if (second) losses.push_back(sum_all(mul(matmul(x, b), x)));
        Tensor total = losses.size() == 1 ? losses[0] : add(losses[0], losses[1]);
        backward(total);
        return grad_of(x);
    };

    const auto g1 = grads_for(true, false);
    const auto g2 = grads_for(false, true);
    const auto g12 = grads_for(true, true);
    for (std::size_t i = 0; i < g12.size(); ++i) {
        CHECK(g12[i] == doctest::Approx(g1[i] + g2[i]).epsilon(1e-12));
    }
}

TEST_CASE("identical graphs give bit-identical gradients") {
    auto run = [] {
        Rng rng(77);
        Tensor x = random_tensor({4, 4}, rng);
        Tensor w = random_tensor({4, 4}, rng, false);
        Tensor loss = sum_all(mul(softmax_rows(matmul(x, w)), layer_norm_rows(x)));
        backward(loss);
        return grad_of(x);
    };
    const auto a = run();
    const auto b = run();
    CHECK(a == b);
}

TEST_CASE("a node feeding two consumers is visited once") {
    Tensor x = Tensor::scalar(2.0, true);
    Tensor shared = add(x, x);              // 4
    Tensor loss = sum_all(mul(shared, shared));  // 16x'... d/dx = 2*shared*2 = 16
    GradTape tape(loss);
    CHECK(tape.size() == 4);  // x, add, mul, sum
    tape.backward();
    CHECK(x.grad()[0] == doctest::Approx(16.0));
}

TEST_CASE("embedding gradient scatter-adds duplicate rows") {
    Tensor table = Tensor::from({2, 2}, {1.0, 2.0, 3.0, 4.0}, true);
    Tensor rows = embedding_rows(table, {0, 1, 0});
    backward(sum_all(rows));
    CHECK(table.grad()[0] == doctest::Approx(2.0));
    CHECK(table.grad()[1] == doctest::Approx(2.0));
    CHECK(table.grad()[2] == doctest::Approx(1.0));
    CHECK(table.grad()[3] == doctest::Approx(1.0));
}

TEST_CASE("detach cuts the gradient path") {
    Tensor x = Tensor::scalar(3.0, true);
    Tensor y = detach(mul(x, x));
    backward(sum_all(mul(y, y)));
    CHECK(grad_of(x) == std::vector<Real>{0.0});
}

TEST_CASE("independent graphs run safely on independent threads") {
    std::vector<std::vector<Real>> results(4);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([t, &results] {
            Rng rng(123 + static_cast<std::uint64_t>(t));
            Tensor x = random_tensor({8, 8}, rng);
            Tensor w = random_tensor({8, 8}, rng, false);
            backward(sum_all(mul(matmul(x, w), x)));
            results[static_cast<std::size_t>(t)] = grad_of(x);
        });
    }
    for (auto& th : threads) th.join();
    for (int t = 0; t < 4; ++t) {
        Rng rng(123 + static_cast<std::uint64_t>(t));
        Tensor x = random_tensor({8, 8}, rng);
        Tensor w = random_tensor({8, 8}, rng, false);
        backward(sum_all(mul(matmul(x, w), x)));
        CHECK(results[static_cast<std::size_t>(t)] == grad_of(x));
    }
}

TEST_CASE("sgd step matches the analytic update") {
    Tensor x = Tensor::scalar(1.0, true);
    Optimizer opt({OptKind::sgd, 0.1}, {x});
    backward(sum_all(mul(x, x)));
    CHECK(opt.step());
    CHECK(x.item() == doctest::Approx(0.8));
}

TEST_CASE("zero gradient leaves parameters unchanged") {
    Tensor x = Tensor::from({3}, {1.0, 2.0, 3.0}, true);
    Optimizer opt({OptKind::adam, 0.05}, {x});
    x.node()->ensure_grad();
    CHECK(opt.step());
    CHECK(x.data()[0] == 1.0);
    CHECK(x.data()[1] == 2.0);
    CHECK(x.data()[2] == 3.0);
}

TEST_CASE("adam converges on a convex quadratic") {
    Tensor x = Tensor::scalar(1.0, true);
    Optimizer opt({OptKind::adam, 0.05}, {x});
    for (int i = 0; i < 100; ++i) {
        opt.zero_grad();
        backward(sum_all(mul(x, x)));
        CHECK(opt.step());
    }
    CHECK(std::abs(x.item()) < 0.01);
    // Reference trajectory computed step by step outside this code base.
    CHECK(x.item() == doctest::Approx(-0.00421140038463883).epsilon(1e-9));
}

TEST_CASE("a non-finite gradient skips the whole step") {
    Tensor x = Tensor::from({2}, {1.0, 2.0}, true);
    Optimizer opt({OptKind::sgd, 0.1}, {x});
    x.node()->ensure_grad();
    x.node()->grad[0] = std::numeric_limits<Real>::quiet_NaN();
    x.node()->grad[1] = 5.0;
    CHECK_FALSE(opt.step());
    CHECK(opt.skipped_steps() == 1);
    CHECK(x.data()[0] == 1.0);
    CHECK(x.data()[1] == 2.0);
}

TEST_CASE("checkpoint round trip restores exact bits") {
    Rng rng(31);
    ParamSet params;
    params.add("enc.weight", random_tensor({5, 4}, rng));
    params.add("enc.bias", random_tensor({4}, rng));
    const std::vector<Real> w0 = {params.find("enc.weight").data().begin(),
                                  params.find("enc.weight").data().end()};

    const auto path = std::filesystem::temp_directory_path() / "parafine_ckpt_test.json";
    save_checkpoint(path.string(), params, {{"seed", "31"}});

    ParamSet fresh;
    fresh.add("enc.weight", Tensor::zeros({5, 4}, true));
    fresh.add("enc.bias", Tensor::zeros({4}, true));
    const auto meta = load_checkpoint(path.string(), fresh);
    CHECK(meta.at("seed") == "31");
    const auto& loaded = fresh.find("enc.weight");
    for (std::size_t i = 0; i < w0.size(); ++i) CHECK(loaded.data()[i] == w0[i]);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint loader rejects a version mismatch") {
    const auto path = std::filesystem::temp_directory_path() / "parafine_ckpt_badver.json";
    {
        std::ofstream out(path);
        out << R"({"format_version": 999, "metadata": {}, "params": {}})";
    }
    ParamSet params;
    CHECK_THROWS_WITH_AS(load_checkpoint(path.string(), params),
                         doctest::Contains("format_version 999"), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint loader rejects shape and name mismatches") {
    Rng rng(33);
    ParamSet params;
    params.add("w", random_tensor({2, 2}, rng));
    const auto path = std::filesystem::temp_directory_path() / "parafine_ckpt_shape.json";
    save_checkpoint(path.string(), params, {});

    ParamSet wrong_shape;
    wrong_shape.add("w", Tensor::zeros({2, 3}, true));
    CHECK_THROWS_AS(load_checkpoint(path.string(), wrong_shape), std::runtime_error);

    ParamSet missing;
    missing.add("w", Tensor::zeros({2, 2}, true));
    missing.add("extra", Tensor::zeros({1}, true));
    CHECK_THROWS_AS(load_checkpoint(path.string(), missing), std::runtime_error);
    std::filesystem::remove(path);
}
