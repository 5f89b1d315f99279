#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "remod/records.hpp"
#include "remod/rng.hpp"
#include "remod/roc.hpp"
#include "remod/util.hpp"

namespace remod::classify {

struct Sample {
    std::string snippet_id;
    std::vector<double> vector;
    RelationLabel label = RelationLabel::none;
};

struct DatasetSplit {
    std::vector<Sample> train;
    std::vector<Sample> validation;
    std::vector<Sample> test;
    std::uint64_t seed = 0;
};

// Down-samples every class to the minimum class count, shuffles, and
// splits 64/16/20 as two stacked 80/20 cuts (2,990 -> 1,913/479/598).
// `none` samples must have been removed upstream.
inline DatasetSplit balance_and_split(const std::vector<Sample>& samples, std::uint64_t seed) {
    std::map<RelationLabel, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].label == RelationLabel::none)
            throw Error("balance_and_split: 'none'-labeled samples must be removed first");
        by_class[samples[i].label].push_back(i);
    }
    if (by_class.size() < 2) throw Error("balance_and_split requires at least 2 classes");
    std::size_t min_count = samples.size();
    for (const auto& [label, idx] : by_class) {
        if (idx.empty()) throw Error(std::string("class with 0 samples: ") + to_string(label));
        min_count = std::min(min_count, idx.size());
    }

    Rng rng(derive_seed(seed, 0x62616c61ull));
    std::vector<std::size_t> pool;
    for (const auto& [label, idx] : by_class) {
        std::vector<std::size_t> perm = rng.permutation(idx.size());
        for (std::size_t k = 0; k < min_count; ++k) pool.push_back(idx[perm[k]]);
    }
    std::vector<std::size_t> shuffle = rng.permutation(pool.size());

    std::size_t n = pool.size();
    std::size_t trainval = n * 8 / 10;
    std::size_t train_n = trainval * 8 / 10;
    DatasetSplit split;
    split.seed = seed;
    for (std::size_t k = 0; k < n; ++k) {
        const Sample& s = samples[pool[shuffle[k]]];
        if (k < train_n)
            split.train.push_back(s);
        else if (k < trainval)
            split.validation.push_back(s);
        else
            split.test.push_back(s);
    }
    return split;
}

enum class ClassifierKind { softmax_regression, wide_mlp };

inline const char* to_string(ClassifierKind k) {
    return k == ClassifierKind::softmax_regression ? "softmax_regression" : "wide_mlp";
}

inline ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "softmax_regression") return ClassifierKind::softmax_regression;
    if (s == "wide_mlp") return ClassifierKind::wide_mlp;
    throw Error("unknown classifier kind '" + s + "'");
}

struct TrainHyperparams {
    double learning_rate = 0.05;
    int epochs = 60;
    int batch_size = 32;
    int hidden_width = 1024;
    std::uint64_t seed = 7;
};

struct TrainMeta {
    int epochs_run = 0;
    int best_epoch = 0;
    double best_validation_loss = 0.0;
    double final_train_loss = 0.0;
};

// Linear softmax or one-hidden-layer ReLU network; the forward pass
// always yields a probability simplex.
struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::softmax_regression;
    int input_dim = 0;
    int hidden_width = 0; // 0 for softmax_regression
    std::vector<std::string> classes;
    std::vector<double> w1, b1; // hidden (or output for softmax)
    std::vector<double> w2, b2; // output layer of the MLP
    TrainMeta meta;

    int class_count() const { return static_cast<int>(classes.size()); }

    std::vector<double> logits(std::span<const double> x) const {
        int c = class_count();
        if (kind == ClassifierKind::softmax_regression) {
            std::vector<double> z(b1);
            for (int i = 0; i < c; ++i) {
                const double* w = w1.data() + static_cast<std::size_t>(i) * input_dim;
                double s = 0.0;
                for (int d = 0; d < input_dim; ++d) s += w[d] * x[d];
                z[static_cast<std::size_t>(i)] += s;
            }
            return z;
        }
        std::vector<double> h(b1);
        for (int i = 0; i < hidden_width; ++i) {
            const double* w = w1.data() + static_cast<std::size_t>(i) * input_dim;
            double s = 0.0;
            for (int d = 0; d < input_dim; ++d) s += w[d] * x[d];
            h[static_cast<std::size_t>(i)] = std::max(0.0, h[static_cast<std::size_t>(i)] + s);
        }
        std::vector<double> z(b2);
        for (int i = 0; i < c; ++i) {
            const double* w = w2.data() + static_cast<std::size_t>(i) * hidden_width;
            double s = 0.0;
            for (int d = 0; d < hidden_width; ++d) s += w[d] * h[static_cast<std::size_t>(d)];
            z[static_cast<std::size_t>(i)] += s;
        }
        return z;
    }

    std::vector<double> probabilities(std::span<const double> x) const {
        std::vector<double> z = logits(x);
        double zmax = *std::max_element(z.begin(), z.end());
        double total = 0.0;
        for (double& v : z) {
            v = std::exp(v - zmax);
            total += v;
        }
        for (double& v : z) v /= total;
        return z;
    }

    int predict(std::span<const double> x) const {
        std::vector<double> z = logits(x);
        return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    }
};

struct Gradients {
    std::vector<double> w1, b1, w2, b2;

    explicit Gradients(const ClassifierModel& m)
        : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), w2(m.w2.size(), 0.0), b2(m.b2.size(), 0.0) {}
};

// Mean softmax cross-entropy over the batch; accumulates the analytic
// gradient when `grads` is non-null. Shared by the trainer and the
// finite-difference checks.
inline double batch_loss(const ClassifierModel& model, std::span<const Sample> batch,
                         std::span<const int> targets, Gradients* grads = nullptr) {
    int c = model.class_count();
    double loss = 0.0;
    double inv_n = 1.0 / static_cast<double>(batch.size());
    std::vector<double> h(static_cast<std::size_t>(std::max(model.hidden_width, 0)));
    for (std::size_t b = 0; b < batch.size(); ++b) {
        std::span<const double> x = batch[b].vector;
        std::vector<double> z;
        if (model.kind == ClassifierKind::softmax_regression) {
            z = model.logits(x);
        } else {
            for (int i = 0; i < model.hidden_width; ++i) {
                const double* w = model.w1.data() + static_cast<std::size_t>(i) * model.input_dim;
                double s = model.b1[static_cast<std::size_t>(i)];
                for (int d = 0; d < model.input_dim; ++d) s += w[d] * x[d];
                h[static_cast<std::size_t>(i)] = std::max(0.0, s);
            }
            z.assign(model.b2.begin(), model.b2.end());
            for (int i = 0; i < c; ++i) {
                const double* w = model.w2.data() + static_cast<std::size_t>(i) * model.hidden_width;
                double s = 0.0;
                for (int d = 0; d < model.hidden_width; ++d) s += w[d] * h[static_cast<std::size_t>(d)];
                z[static_cast<std::size_t>(i)] += s;
            }
        }
        double zmax = *std::max_element(z.begin(), z.end());
        double total = 0.0;
        std::vector<double> p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            p[i] = std::exp(z[i] - zmax);
            total += p[i];
        }
        for (double& v : p) v /= total;
        loss -= std::log(std::max(p[static_cast<std::size_t>(targets[b])], 1e-300)) * inv_n;

        if (!grads) continue;
        std::vector<double> dz = p;
        dz[static_cast<std::size_t>(targets[b])] -= 1.0;
        for (double& v : dz) v *= inv_n;
        if (model.kind == ClassifierKind::softmax_regression) {
            for (int i = 0; i < c; ++i) {
                double* gw = grads->w1.data() + static_cast<std::size_t>(i) * model.input_dim;
                for (int d = 0; d < model.input_dim; ++d) gw[d] += dz[static_cast<std::size_t>(i)] * x[d];
                grads->b1[static_cast<std::size_t>(i)] += dz[static_cast<std::size_t>(i)];
            }
        } else {
            std::vector<double> dh(static_cast<std::size_t>(model.hidden_width), 0.0);
            for (int i = 0; i < c; ++i) {
                double* gw = grads->w2.data() + static_cast<std::size_t>(i) * model.hidden_width;
                const double* w = model.w2.data() + static_cast<std::size_t>(i) * model.hidden_width;
                for (int d = 0; d < model.hidden_width; ++d) {
                    gw[d] += dz[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(d)];
                    dh[static_cast<std::size_t>(d)] += dz[static_cast<std::size_t>(i)] * w[d];
                }
                grads->b2[static_cast<std::size_t>(i)] += dz[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < model.hidden_width; ++i) {
                if (h[static_cast<std::size_t>(i)] <= 0.0) continue; // ReLU gate
                double* gw = grads->w1.data() + static_cast<std::size_t>(i) * model.input_dim;
                for (int d = 0; d < model.input_dim; ++d) gw[d] += dh[static_cast<std::size_t>(i)] * x[d];
                grads->b1[static_cast<std::size_t>(i)] += dh[static_cast<std::size_t>(i)];
            }
        }
    }
    return loss;
}

namespace detail {

inline std::vector<int> target_indices(std::span<const Sample> samples,
                                       const std::vector<std::string>& classes) {
    std::vector<int> targets(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto it = std::find(classes.begin(), classes.end(),
                            std::string(remod::to_string(samples[i].label)));
        if (it == classes.end())
            throw Error("sample label not in model class list: " +
                        std::string(remod::to_string(samples[i].label)));
        targets[i] = static_cast<int>(it - classes.begin());
    }
    return targets;
}

} // namespace detail

inline ClassifierModel init_model(ClassifierKind kind, int input_dim,
                                  const std::vector<std::string>& classes,
                                  const TrainHyperparams& hp) {
    ClassifierModel m;
    m.kind = kind;
    m.input_dim = input_dim;
    m.classes = classes;
    int c = static_cast<int>(classes.size());
    Rng rng(derive_seed(hp.seed, 0x696e6974ull));
    auto uniform = [&](std::size_t count, double scale) {
        std::vector<double> v(count);
        for (double& x : v) x = (rng.next_double() * 2.0 - 1.0) * scale;
        return v;
    };
    if (kind == ClassifierKind::softmax_regression) {
        m.hidden_width = 0;
        m.w1 = uniform(static_cast<std::size_t>(c) * input_dim, 1.0 / std::sqrt(input_dim));
        m.b1.assign(static_cast<std::size_t>(c), 0.0);
    } else {
        m.hidden_width = hp.hidden_width;
        m.w1 = uniform(static_cast<std::size_t>(m.hidden_width) * input_dim,
                       1.0 / std::sqrt(input_dim));
        m.b1.assign(static_cast<std::size_t>(m.hidden_width), 0.0);
        m.w2 = uniform(static_cast<std::size_t>(c) * m.hidden_width,
                       1.0 / std::sqrt(m.hidden_width));
        m.b2.assign(static_cast<std::size_t>(c), 0.0);
    }
    return m;
}

// Mini-batch SGD on softmax cross-entropy; validation loss is monitored
// every epoch and the best-epoch parameters are returned.
inline ClassifierModel train_classifier(const DatasetSplit& split, ClassifierKind kind,
                                        const TrainHyperparams& hp) {
    if (split.train.empty()) throw Error("training split is empty");
    int input_dim = static_cast<int>(split.train.front().vector.size());
    for (const Sample& s : split.train)
        if (static_cast<int>(s.vector.size()) != input_dim)
            throw Error("training vectors share no single dimension");

    std::vector<std::string> classes;
    for (const Sample& s : split.train) {
        std::string name = remod::to_string(s.label);
        if (std::find(classes.begin(), classes.end(), name) == classes.end())
            classes.push_back(name);
    }
    std::sort(classes.begin(), classes.end());

    ClassifierModel model = init_model(kind, input_dim, classes, hp);
    std::vector<int> train_targets = detail::target_indices(split.train, classes);
    std::vector<int> val_targets = detail::target_indices(split.validation, classes);

    ClassifierModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    Rng rng(derive_seed(hp.seed, 0x73687566ull));
    double train_loss = 0.0;

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        std::vector<std::size_t> order = rng.permutation(split.train.size());
        for (std::size_t start = 0, batch_no = 0; start < order.size();
             start += hp.batch_size, ++batch_no) {
            std::size_t end = std::min(order.size(), start + hp.batch_size);
            std::vector<Sample> batch;
            std::vector<int> targets;
            for (std::size_t k = start; k < end; ++k) {
                batch.push_back(split.train[order[k]]);
                targets.push_back(train_targets[order[k]]);
            }
            Gradients grads(model);
            double loss = batch_loss(model, batch, targets, &grads);
            if (!std::isfinite(loss))
                throw Error("non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                            std::to_string(batch_no));
            auto apply = [&](std::vector<double>& w, const std::vector<double>& g) {
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= hp.learning_rate * g[i];
            };
            apply(model.w1, grads.w1);
            apply(model.b1, grads.b1);
            apply(model.w2, grads.w2);
            apply(model.b2, grads.b2);
        }
        train_loss = batch_loss(model, split.train, train_targets);
        double monitored = split.validation.empty()
                               ? train_loss
                               : batch_loss(model, split.validation, val_targets);
        if (monitored < best_val) {
            best_val = monitored;
            best = model;
            best.meta.best_epoch = epoch;
        }
    }
    best.meta.epochs_run = hp.epochs;
    best.meta.best_validation_loss = best_val;
    best.meta.final_train_loss = train_loss;
    return best;
}

struct Metrics {
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> confusion; // row true, col predicted
    std::vector<double> precision, recall, f1;       // per class
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    std::vector<double> ovr_auc;                     // NaN when skipped
    double macro_auc = 0.0;
    std::vector<std::string> auc_skipped_classes;
};

// Macro-averaged precision/recall/F1 from argmax predictions plus
// macro one-vs-rest AUC from the class probability scores.
inline Metrics compute_metrics(const std::vector<std::vector<double>>& probs,
                               const std::vector<int>& targets,
                               const std::vector<std::string>& classes) {
    if (probs.empty()) throw Error("test set is empty");
    int c = static_cast<int>(classes.size());

    Metrics m;
    m.classes = classes;
    m.confusion.assign(c, std::vector<std::size_t>(c, 0));
    for (std::size_t i = 0; i < probs.size(); ++i) {
        int pred = static_cast<int>(
            std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
        m.confusion[static_cast<std::size_t>(targets[i])][static_cast<std::size_t>(pred)] += 1;
    }

    m.precision.assign(c, 0.0);
    m.recall.assign(c, 0.0);
    m.f1.assign(c, 0.0);
    for (int k = 0; k < c; ++k) {
        std::size_t tp = m.confusion[k][k];
        std::size_t pred_k = 0, true_k = 0;
        for (int j = 0; j < c; ++j) {
            pred_k += m.confusion[j][k];
            true_k += m.confusion[k][j];
        }
        m.precision[k] = pred_k ? static_cast<double>(tp) / pred_k : 0.0;
        m.recall[k] = true_k ? static_cast<double>(tp) / true_k : 0.0;
        m.f1[k] = (m.precision[k] + m.recall[k]) > 0
                      ? 2.0 * m.precision[k] * m.recall[k] / (m.precision[k] + m.recall[k])
                      : 0.0;
        m.macro_precision += m.precision[k] / c;
        m.macro_recall += m.recall[k] / c;
        m.macro_f1 += m.f1[k] / c;
    }

    m.ovr_auc.assign(c, std::numeric_limits<double>::quiet_NaN());
    double auc_sum = 0.0;
    int auc_n = 0;
    for (int k = 0; k < c; ++k) {
        std::vector<double> scores(probs.size());
        std::vector<bool> labels(probs.size());
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            scores[i] = probs[i][static_cast<std::size_t>(k)];
            labels[i] = targets[i] == k;
            n_pos += labels[i] ? 1 : 0;
        }
        if (n_pos == 0 || n_pos == probs.size()) {
            m.auc_skipped_classes.push_back(classes[static_cast<std::size_t>(k)]);
            continue;
        }
        double auc = roc::roc_auc(scores, labels);
        m.ovr_auc[static_cast<std::size_t>(k)] = auc;
        auc_sum += auc;
        ++auc_n;
    }
    m.macro_auc = auc_n ? auc_sum / auc_n : 0.0;
    return m;
}

inline Metrics evaluate(const ClassifierModel& model, std::span<const Sample> test) {
    if (test.empty()) throw Error("test set is empty");
    std::vector<int> targets = detail::target_indices(test, model.classes);
    std::vector<std::vector<double>> probs(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) probs[i] = model.probabilities(test[i].vector);
    return compute_metrics(probs, targets, model.classes);
}

// PCA onto the top-2 principal components (deterministic t-SNE stand-in
// for the projection export).
inline std::vector<std::pair<double, double>> project_2d(
    const std::vector<std::vector<double>>& features) {
    if (features.size() < 2) throw Error("project_2d requires at least 2 samples");
    std::size_t n = features.size();
    std::size_t d = features.front().size();
    std::vector<double> mean(d, 0.0);
    for (const auto& row : features)
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j] / static_cast<double>(n);

    std::vector<double> cov(d * d, 0.0);
    std::vector<double> centered(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered[i * d + j] = features[i][j] - mean[j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < d; ++a) {
            double va = centered[i * d + a];
            if (va == 0.0) continue;
            for (std::size_t b = a; b < d; ++b) cov[a * d + b] += va * centered[i * d + b];
        }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov[a * d + b] /= static_cast<double>(n);
            cov[b * d + a] = cov[a * d + b];
        }

    // Cyclic Jacobi eigenvalue iteration; V accumulates the rotations.
    std::vector<double> V(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) V[i * d + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += cov[p * d + q] * cov[p * d + q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                double apq = cov[p * d + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = cov[p * d + p], aqq = cov[q * d + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double cos_r = 1.0 / std::sqrt(t * t + 1.0);
                double sin_r = t * cos_r;
                for (std::size_t k = 0; k < d; ++k) {
                    double akp = cov[k * d + p], akq = cov[k * d + q];
                    cov[k * d + p] = cos_r * akp - sin_r * akq;
                    cov[k * d + q] = sin_r * akp + cos_r * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double apk = cov[p * d + k], aqk = cov[q * d + k];
                    cov[p * d + k] = cos_r * apk - sin_r * aqk;
                    cov[q * d + k] = sin_r * apk + cos_r * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double vkp = V[k * d + p], vkq = V[k * d + q];
                    V[k * d + p] = cos_r * vkp - sin_r * vkq;
                    V[k * d + q] = sin_r * vkp + cos_r * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cov[a * d + a] > cov[b * d + b]; });

    auto component = [&](std::size_t rank) {
        std::vector<double> v(d);
        for (std::size_t k = 0; k < d; ++k) v[k] = V[k * d + order[rank]];
        // Deterministic sign: the largest-magnitude loading is positive.
        std::size_t arg = 0;
        for (std::size_t k = 1; k < d; ++k)
            if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
        if (v[arg] < 0)
            for (double& x : v) x = -x;
        return v;
    };
    std::vector<double> pc1 = component(0);
    std::vector<double> pc2 = d > 1 ? component(1) : std::vector<double>(d, 0.0);

    std::vector<std::pair<double, double>> coords(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0, y = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            x += centered[i * d + j] * pc1[j];
            y += centered[i * d + j] * pc2[j];
        }
        coords[i] = {x, y};
    }
    return coords;
}

inline nlohmann::json model_to_json(const ClassifierModel& m) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = to_string(m.kind);
    j["input_dim"] = m.input_dim;
    j["hidden_width"] = m.hidden_width;
    j["classes"] = m.classes;
    j["w1"] = m.w1;
    j["b1"] = m.b1;
    j["w2"] = m.w2;
    j["b2"] = m.b2;
    j["meta"] = {{"epochs_run", m.meta.epochs_run},
                 {"best_epoch", m.meta.best_epoch},
                 {"best_validation_loss", m.meta.best_validation_loss},
                 {"final_train_loss", m.meta.final_train_loss}};
    return j;
}

inline ClassifierModel model_from_json(const nlohmann::json& j) {
    if (j.value("format_version", 0) != 1) throw Error("unsupported model format version");
    ClassifierModel m;
    m.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    m.input_dim = j.at("input_dim").get<int>();
    m.hidden_width = j.at("hidden_width").get<int>();
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    const auto& meta = j.at("meta");
    m.meta.epochs_run = meta.at("epochs_run").get<int>();
    m.meta.best_epoch = meta.at("best_epoch").get<int>();
    m.meta.best_validation_loss = meta.at("best_validation_loss").get<double>();
    m.meta.final_train_loss = meta.at("final_train_loss").get<double>();
    return m;
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
    nlohmann::json j;
    j["averaging"] = "macro";
    j["classes"] = m.classes;
    j["confusion"] = m.confusion;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["macro_precision"] = m.macro_precision;
    j["macro_recall"] = m.macro_recall;
    j["macro_f1"] = m.macro_f1;
    nlohmann::json aucs = nlohmann::json::array();
    for (double a : m.ovr_auc)
        aucs.push_back(std::isnan(a) ? nlohmann::json(nullptr) : nlohmann::json(a));
    j["ovr_auc"] = aucs;
    j["macro_auc"] = m.macro_auc;
    j["auc_skipped_classes"] = m.auc_skipped_classes;
    return j;
}

} // namespace remod::classify
