#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "remod/classifier.hpp"

using namespace remod;
using classify::ClassifierKind;
using classify::ClassifierModel;
using classify::DatasetSplit;
using classify::Sample;
using classify::TrainHyperparams;

namespace {

Sample sample_of(const std::string& id, RelationLabel label, std::vector<double> vec) {
    return {id, std::move(vec), label};
}

std::vector<Sample> class_counts(const std::map<RelationLabel, int>& counts) {
    std::vector<Sample> out;
    int serial = 0;
    for (const auto& [label, n] : counts)
        for (int i = 0; i < n; ++i)
            out.push_back(sample_of("s" + std::to_string(serial++), label,
                                    {static_cast<double>(i), 1.0}));
    return out;
}

std::set<std::string> ids_of(const std::vector<Sample>& part) {
    std::set<std::string> out;
    for (const Sample& s : part) out.insert(s.snippet_id);
    return out;
}

} // namespace

TEST_CASE("balancing downsamples every class to the minimum count") {
    auto samples = class_counts({{RelationLabel::institution, 10}, {RelationLabel::education, 4}});
    DatasetSplit split = classify::balance_and_split(samples, 5);
    std::map<RelationLabel, int> seen;
    for (const auto* part : {&split.train, &split.validation, &split.test})
        for (const Sample& s : *part) seen[s.label] += 1;
    CHECK(seen[RelationLabel::institution] == 4);
    CHECK(seen[RelationLabel::education] == 4);
}

TEST_CASE("the 2,990-sample pool splits 1,913 / 479 / 598") {
    std::map<RelationLabel, int> counts;
    for (RelationLabel rel : kRelations) counts[rel] = 598;
    auto samples = class_counts(counts);
    REQUIRE(samples.size() == 2990);
    DatasetSplit split = classify::balance_and_split(samples, 99);
    CHECK(split.train.size() == 1913);
    CHECK(split.validation.size() == 479);
    CHECK(split.test.size() == 598);
}

TEST_CASE("splits are disjoint by snippet id and deterministic under the seed") {
    auto samples = class_counts({{RelationLabel::institution, 40},
                                 {RelationLabel::education, 25},
                                 {RelationLabel::place_of_death, 31}});
    DatasetSplit a = classify::balance_and_split(samples, 7);
    DatasetSplit b = classify::balance_and_split(samples, 7);
    CHECK(ids_of(a.train) == ids_of(b.train));
    CHECK(ids_of(a.validation) == ids_of(b.validation));
    CHECK(ids_of(a.test) == ids_of(b.test));

    std::set<std::string> all = ids_of(a.train);
    std::size_t before = all.size();
    for (const std::string& id : ids_of(a.validation)) CHECK(all.insert(id).second);
    for (const std::string& id : ids_of(a.test)) CHECK(all.insert(id).second);
    CHECK(all.size() == before + a.validation.size() + a.test.size());

    DatasetSplit c = classify::balance_and_split(samples, 8);
    CHECK(ids_of(c.train) != ids_of(a.train));
}

TEST_CASE("split proportions follow the stacked 80/20 rule for any pool size") {
    for (std::size_t per_class : {3u, 10u, 17u, 120u, 598u}) {
        auto samples = class_counts({{RelationLabel::institution, static_cast<int>(per_class)},
                                     {RelationLabel::education, static_cast<int>(per_class)}});
        DatasetSplit split = classify::balance_and_split(samples, 3);
        std::size_t n = 2 * per_class;
        std::size_t trainval = n * 8 / 10;
        CHECK(split.train.size() == trainval * 8 / 10);
        CHECK(split.validation.size() == trainval - trainval * 8 / 10);
        CHECK(split.test.size() == n - trainval);
        CHECK(split.train.size() + split.validation.size() + split.test.size() == n);
    }
}

TEST_CASE("degenerate pools are rejected") {
    CHECK_THROWS_AS(classify::balance_and_split(
                        class_counts({{RelationLabel::institution, 5}}), 1),
                    Error);
    auto with_none = class_counts({{RelationLabel::institution, 3},
                                   {RelationLabel::education, 3}});
    with_none.push_back(sample_of("n", RelationLabel::none, {0.0, 0.0}));
    CHECK_THROWS_AS(classify::balance_and_split(with_none, 1), Error);
}

TEST_CASE("softmax regression fits a linearly separable toy set perfectly") {
    std::vector<Sample> train;
    for (int i = 0; i < 20; ++i) {
        double offset = static_cast<double>(i % 5) * 0.05;
        train.push_back(sample_of("a" + std::to_string(i), RelationLabel::institution,
                                  {1.0 + offset, 0.0}));
        train.push_back(sample_of("b" + std::to_string(i), RelationLabel::education,
                                  {-1.0 - offset, 0.0}));
    }
    DatasetSplit split{train, {}, train, 0};
    TrainHyperparams hp;
    hp.learning_rate = 0.5;
    hp.epochs = 60;
    hp.batch_size = 8;
    ClassifierModel model =
        classify::train_classifier(split, ClassifierKind::softmax_regression, hp);
    classify::Metrics m = classify::evaluate(model, split.test);
    CHECK(m.macro_recall == 1.0);
    CHECK(m.macro_precision == 1.0);
}

TEST_CASE("XOR defeats the linear model but not the wide MLP") {
    std::vector<Sample> train;
    int serial = 0;
    for (int rep = 0; rep < 25; ++rep) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                RelationLabel label =
                    (a ^ b) ? RelationLabel::education : RelationLabel::institution;
                train.push_back(sample_of("x" + std::to_string(serial++), label,
                                          {static_cast<double>(a), static_cast<double>(b)}));
            }
        }
    }
    DatasetSplit split{train, {}, train, 0};

    TrainHyperparams linear_hp;
    linear_hp.learning_rate = 0.3;
    linear_hp.epochs = 120;
    ClassifierModel linear =
        classify::train_classifier(split, ClassifierKind::softmax_regression, linear_hp);
    std::size_t linear_correct = 0;
    for (const Sample& s : train) {
        int pred = linear.predict(s.vector);
        if (linear.classes[static_cast<std::size_t>(pred)] == to_string(s.label))
            ++linear_correct;
    }
    CHECK(linear_correct <= train.size() * 3 / 4);

    TrainHyperparams mlp_hp;
    mlp_hp.learning_rate = 0.3;
    mlp_hp.epochs = 200;
    mlp_hp.hidden_width = 16;
    mlp_hp.seed = 11;
    ClassifierModel mlp = classify::train_classifier(split, ClassifierKind::wide_mlp, mlp_hp);
    std::size_t mlp_correct = 0;
    for (const Sample& s : train) {
        int pred = mlp.predict(s.vector);
        if (mlp.classes[static_cast<std::size_t>(pred)] == to_string(s.label)) ++mlp_correct;
    }
    CHECK(mlp_correct == train.size());
}

TEST_CASE("output probabilities always sum to 1") {
    Rng rng(21);
    TrainHyperparams hp;
    hp.hidden_width = 8;
    ClassifierModel model = classify::init_model(
        ClassifierKind::wide_mlp, 4, {"education", "institution", "place_of_birth"}, hp);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(4);
        for (double& v : x) v = (rng.next_double() - 0.5) * 20.0;
        std::vector<double> p = model.probabilities(x);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("argmax prediction is invariant under a constant logit shift") {
    Rng rng(22);
    TrainHyperparams hp;
    ClassifierModel model = classify::init_model(
        ClassifierKind::softmax_regression, 3, {"a", "b", "c"}, hp);
    for (double& w : model.w1) w = rng.next_double() * 2.0 - 1.0;
    ClassifierModel shifted = model;
    for (double& b : shifted.b1) b += 123.25;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.next_double() * 6.0 - 3.0;
        CHECK(model.predict(x) == shifted.predict(x));
    }
}

TEST_CASE("analytic classifier gradients match finite differences") {
    Rng rng(23);
    for (ClassifierKind kind : {ClassifierKind::softmax_regression, ClassifierKind::wide_mlp}) {
        TrainHyperparams hp;
        hp.hidden_width = 7;
        hp.seed = 31;
        ClassifierModel model = classify::init_model(kind, 4, {"a", "b", "c"}, hp);
        // Move off the ReLU kinks so central differences are clean.
        for (double& b : model.b1) b = rng.next_double() * 0.2 + 0.05;

        std::vector<Sample> batch;
        std::vector<int> targets;
        for (int i = 0; i < 10; ++i) {
            std::vector<double> x(4);
            for (double& v : x) v = rng.next_double() * 2.0 - 1.0;
            batch.push_back(sample_of("g" + std::to_string(i), RelationLabel::education, x));
            targets.push_back(static_cast<int>(rng.uniform_index(3)));
        }

        classify::Gradients grads(model);
        classify::batch_loss(model, batch, targets, &grads);
        auto eval = [&]() { return classify::batch_loss(model, batch, targets); };

        double worst = 0.0;
        auto check_block = [&](std::vector<double>& params, const std::vector<double>& analytic) {
            for (std::size_t i = 0; i < params.size(); ++i) {
                double fd = oracles::central_difference(eval, params[i], 1e-6);
                worst = std::max(worst, oracles::relative_error(fd, analytic[i]));
            }
        };
        check_block(model.w1, grads.w1);
        check_block(model.b1, grads.b1);
        check_block(model.w2, grads.w2);
        check_block(model.b2, grads.b2);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("non-finite parameters surface as a positioned training error") {
    std::vector<Sample> train = {sample_of("a", RelationLabel::education, {1e308, 1e308}),
                                 sample_of("b", RelationLabel::institution, {-1e308, -1e308})};
    DatasetSplit split{train, {}, train, 0};
    TrainHyperparams hp;
    hp.learning_rate = 1e6;
    hp.epochs = 5;
    CHECK_THROWS_WITH(classify::train_classifier(split, ClassifierKind::softmax_regression, hp),
                      Catch::Matchers::ContainsSubstring("epoch"));
}

TEST_CASE("metrics match the brute-force oracle on random 50-sample predictions") {
    Rng rng(24);
    std::vector<std::string> classes = {"a", "b", "c"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> probs;
        std::vector<int> targets;
        for (int i = 0; i < 50; ++i) {
            std::vector<double> p(3);
            double sum = 0.0;
            for (double& v : p) {
                // Coarse grid so score ties actually occur.
                v = static_cast<double>(1 + rng.uniform_index(5));
                sum += v;
            }
            for (double& v : p) v /= sum;
            probs.push_back(p);
            targets.push_back(static_cast<int>(rng.uniform_index(3)));
        }
        classify::Metrics m = classify::compute_metrics(probs, targets, classes);

        // Confusion, precision, recall by direct counting.
        for (int k = 0; k < 3; ++k) {
            std::size_t tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                int pred = static_cast<int>(
                    std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
                if (pred == k && targets[i] == k) ++tp;
                if (pred == k && targets[i] != k) ++fp;
                if (pred != k && targets[i] == k) ++fn;
            }
            double precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
            double recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
            CHECK(m.precision[static_cast<std::size_t>(k)] == precision);
            CHECK(m.recall[static_cast<std::size_t>(k)] == recall);

            std::vector<double> scores;
            std::vector<bool> labels;
            bool has_pos = false, has_neg = false;
            for (std::size_t i = 0; i < probs.size(); ++i) {
                scores.push_back(probs[i][static_cast<std::size_t>(k)]);
                labels.push_back(targets[i] == k);
                (targets[i] == k ? has_pos : has_neg) = true;
            }
            if (has_pos && has_neg) {
                double oracle = oracles::pairwise_auc(scores, labels);
                CHECK(m.ovr_auc[static_cast<std::size_t>(k)] == oracle);
            }
        }
        std::size_t row_total = 0;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) row_total += m.confusion[k][j];
        CHECK(row_total == probs.size());
    }
}

TEST_CASE("a perfect predictor scores 1.0 everywhere; constant scores give AUC 0.5") {
    std::vector<std::vector<double>> perfect = {{0.9, 0.05, 0.05},
                                                {0.1, 0.8, 0.1},
                                                {0.05, 0.05, 0.9},
                                                {0.7, 0.2, 0.1}};
    std::vector<int> targets = {0, 1, 2, 0};
    classify::Metrics m = classify::compute_metrics(perfect, targets, {"a", "b", "c"});
    CHECK(m.macro_precision == 1.0);
    CHECK(m.macro_recall == 1.0);
    CHECK(m.macro_f1 == 1.0);
    CHECK(m.macro_auc == 1.0);

    std::vector<std::vector<double>> constant(6, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    std::vector<int> mixed = {0, 1, 2, 0, 1, 2};
    classify::Metrics c = classify::compute_metrics(constant, mixed, {"a", "b", "c"});
    for (double auc : c.ovr_auc) CHECK(auc == 0.5);
}

TEST_CASE("classes absent from the test set are excluded from the macro AUC") {
    std::vector<std::vector<double>> probs = {{0.9, 0.05, 0.05}, {0.2, 0.7, 0.1}};
    std::vector<int> targets = {0, 1}; // class "c" never appears
    classify::Metrics m = classify::compute_metrics(probs, targets, {"a", "b", "c"});
    REQUIRE(m.auc_skipped_classes == std::vector<std::string>{"c"});
    CHECK(std::isnan(m.ovr_auc[2]));
    CHECK(m.macro_auc == (m.ovr_auc[0] + m.ovr_auc[1]) / 2.0);
}

TEST_CASE("PCA projection preserves planar data up to rotation") {
    Rng rng(25);
    // Points on a 2-plane embedded in 6 dimensions.
    std::vector<double> u1(6), u2(6);
    for (double& v : u1) v = rng.next_double() - 0.5;
    for (double& v : u2) v = rng.next_double() - 0.5;
    // Orthonormalize.
    double n1 = std::sqrt(std::inner_product(u1.begin(), u1.end(), u1.begin(), 0.0));
    for (double& v : u1) v /= n1;
    double proj = std::inner_product(u1.begin(), u1.end(), u2.begin(), 0.0);
    for (std::size_t i = 0; i < 6; ++i) u2[i] -= proj * u1[i];
    double n2 = std::sqrt(std::inner_product(u2.begin(), u2.end(), u2.begin(), 0.0));
    for (double& v : u2) v /= n2;

    std::vector<std::vector<double>> data;
    std::vector<std::pair<double, double>> plane;
    for (int i = 0; i < 40; ++i) {
        double a = rng.next_double() * 10.0 - 5.0;
        double b = rng.next_double() * 4.0 - 2.0;
        plane.emplace_back(a, b);
        std::vector<double> x(6);
        for (std::size_t d = 0; d < 6; ++d) x[d] = a * u1[d] + b * u2[d];
        data.push_back(x);
    }
    auto coords = classify::project_2d(data);
    double worst = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = i + 1; j < data.size(); ++j) {
            double din = std::hypot(plane[i].first - plane[j].first,
                                    plane[i].second - plane[j].second);
            double dout = std::hypot(coords[i].first - coords[j].first,
                                     coords[i].second - coords[j].second);
            if (din > 1e-9) worst = std::max(worst, std::abs(din - dout) / din);
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("PCA component variances are ordered and duplicates coincide") {
    Rng rng(26);
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 30; ++i) {
        std::vector<double> x(5);
        for (double& v : x) v = rng.next_double() * 3.0;
        data.push_back(x);
    }
    data.push_back(data[0]); // exact duplicate
    auto coords = classify::project_2d(data);
    double mean_x = 0, mean_y = 0;
    for (auto& [x, y] : coords) {
        mean_x += x / coords.size();
        mean_y += y / coords.size();
    }
    double var_x = 0, var_y = 0;
    for (auto& [x, y] : coords) {
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    CHECK(var_x >= var_y);
    CHECK(coords.front() == coords.back());

    std::vector<std::vector<double>> constant(5, {2.0, 2.0, 2.0});
    for (auto& [x, y] : classify::project_2d(constant)) {
        CHECK(x == 0.0);
        CHECK(y == 0.0);
    }

    // One-dimensional input: the second component is identically zero.
    std::vector<std::vector<double>> line = {{1.0}, {2.0}, {5.0}};
    for (auto& [x, y] : classify::project_2d(line)) CHECK(y == 0.0);
}

TEST_CASE("model JSON round-trips parameters and metadata") {
    TrainHyperparams hp;
    hp.hidden_width = 6;
    ClassifierModel model = classify::init_model(ClassifierKind::wide_mlp, 3,
                                                 {"education", "institution"}, hp);
    model.meta.epochs_run = 12;
    model.meta.best_epoch = 7;
    model.meta.best_validation_loss = 0.321;
    model.meta.final_train_loss = 0.123;
    ClassifierModel back = classify::model_from_json(classify::model_to_json(model));
    CHECK(back.kind == model.kind);
    CHECK(back.input_dim == model.input_dim);
    CHECK(back.hidden_width == model.hidden_width);
    CHECK(back.classes == model.classes);
    CHECK(back.w1 == model.w1);
    CHECK(back.b1 == model.b1);
    CHECK(back.w2 == model.w2);
    CHECK(back.b2 == model.b2);
    CHECK(back.meta.best_epoch == 7);
}
