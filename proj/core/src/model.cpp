#include "streamsage/model.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "streamsage/error.hpp"

namespace streamsage {

// ---------------------------------------------------------------- constant

ConstantModel::ConstantModel(Prediction value) : value_(std::move(value)) {}

Prediction ConstantModel::predict(const Instance&) const { return value_; }

void ConstantModel::learn_one(const LabeledSample&) {}

std::unique_ptr<Model> ConstantModel::clone() const {
    return std::make_unique<ConstantModel>(value_);
}

TargetKind ConstantModel::target_kind() const {
    return value_.kind() == PredictionKind::probabilities ? TargetKind::klass : TargetKind::real;
}

nlohmann::json ConstantModel::payload_json() const {
    if (value_.kind() == PredictionKind::probabilities)
        return {{"probabilities", value_.probs()}};
    return {{"value", value_.value()}};
}

std::unique_ptr<Model> ConstantModel::from_payload(const nlohmann::json& j) {
    if (j.contains("probabilities"))
        return std::make_unique<ConstantModel>(
            Prediction::probabilities(j.at("probabilities").get<std::vector<double>>()));
    return std::make_unique<ConstantModel>(Prediction::real(j.at("value").get<double>()));
}

// --------------------------------------------------------------------- sgd

SgdModel::SgdModel(const StreamSchema& schema, TargetKind tk, int outputs, double lr,
                   bool standardize)
    : schema_(schema), target_kind_(tk), outputs_(outputs), lr_(lr), standardize_(standardize) {
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be finite and >= 0");
    encoded_dim_ = 0;
    for (const auto& f : schema_.features())
        encoded_dim_ += (f.kind == FeatureKind::numeric) ? 1 : static_cast<int>(f.alphabet.size());
    w_.assign(static_cast<std::size_t>(outputs_),
              std::vector<double>(static_cast<std::size_t>(encoded_dim_) + 1, 0.0));
    mean_.assign(static_cast<std::size_t>(encoded_dim_), 0.0);
    m2_.assign(static_cast<std::size_t>(encoded_dim_), 0.0);
}

std::unique_ptr<SgdModel> SgdModel::logistic(const StreamSchema& schema, double learning_rate,
                                             bool standardize) {
    if (schema.target().kind != TargetKind::klass)
        throw ConfigError("logistic model needs a classification target");
    return std::unique_ptr<SgdModel>(new SgdModel(
        schema, TargetKind::klass, schema.target().num_classes, learning_rate, standardize));
}

std::unique_ptr<SgdModel> SgdModel::linear(const StreamSchema& schema, double learning_rate,
                                           bool standardize) {
    if (schema.target().kind != TargetKind::real)
        throw ConfigError("linear model needs a regression target");
    return std::unique_ptr<SgdModel>(new SgdModel(schema, TargetKind::real, 1, learning_rate,
                                                  standardize));
}

std::vector<double> SgdModel::encode(const Instance& x) const {
    schema_.validate_instance(x);
    std::vector<double> enc(static_cast<std::size_t>(encoded_dim_), 0.0);
    std::size_t p = 0;
    for (int i = 0; i < schema_.dim(); ++i) {
        const auto& f = schema_.feature(i);
        if (f.kind == FeatureKind::numeric) {
            double v = x[static_cast<std::size_t>(i)].num();
            if (standardize_ && stat_n_ >= 2.0) {
                const double var = m2_[p] / stat_n_;
                const double sd = std::sqrt(std::max(var, 0.0));
                v = (sd > 1e-12) ? (v - mean_[p]) / sd : v - mean_[p];
            }
            enc[p++] = v;
        } else {
            const auto k = x[static_cast<std::size_t>(i)].cat();
            enc[p + static_cast<std::size_t>(k)] = 1.0;
            p += f.alphabet.size();
        }
    }
    return enc;
}

void SgdModel::standardize_update(const Instance& x) {
    stat_n_ += 1.0;
    std::size_t p = 0;
    for (int i = 0; i < schema_.dim(); ++i) {
        const auto& f = schema_.feature(i);
        if (f.kind == FeatureKind::numeric) {
            const double v = x[static_cast<std::size_t>(i)].num();
            const double delta = v - mean_[p];
            mean_[p] += delta / stat_n_;
            m2_[p] += delta * (v - mean_[p]);
            ++p;
        } else {
            p += f.alphabet.size();
        }
    }
}

Prediction SgdModel::predict(const Instance& x) const {
    const std::vector<double> enc = encode(x);
    auto dot = [&](const std::vector<double>& wk) {
        double z = wk.back();
        for (std::size_t j = 0; j < enc.size(); ++j) z += wk[j] * enc[j];
        return z;
    };
    if (target_kind_ == TargetKind::real) return Prediction::real(dot(w_[0]));

    std::vector<double> z(static_cast<std::size_t>(outputs_));
    for (int k = 0; k < outputs_; ++k) z[static_cast<std::size_t>(k)] = dot(w_[static_cast<std::size_t>(k)]);
    const double zmax = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        total += v;
    }
    for (double& v : z) v /= total;
    return Prediction::probabilities(std::move(z));
}

void SgdModel::learn_one(const LabeledSample& s) {
    schema_.validate_target(s.y);
    if (standardize_) standardize_update(s.x);
    const std::vector<double> enc = encode(s.x);

    auto step = [&](std::vector<double>& wk, double g) {
        for (std::size_t j = 0; j < enc.size(); ++j) wk[j] -= lr_ * g * enc[j];
        wk.back() -= lr_ * g; // bias input is 1
        for (double v : wk)
            if (!std::isfinite(v)) throw NumericError("sgd weights became non-finite");
    };

    if (target_kind_ == TargetKind::real) {
        const double err = predict(s.x).value() - s.y.value();
        step(w_[0], err);
        return;
    }
    const std::vector<double> p = predict(s.x).probs();
    for (int k = 0; k < outputs_; ++k) {
        const double g = p[static_cast<std::size_t>(k)] - (k == s.y.label() ? 1.0 : 0.0);
        step(w_[static_cast<std::size_t>(k)], g);
    }
}

std::unique_ptr<Model> SgdModel::clone() const {
    return std::unique_ptr<Model>(new SgdModel(*this));
}

std::string SgdModel::kind_name() const {
    return target_kind_ == TargetKind::klass ? "sgd_logistic" : "sgd_linear";
}

nlohmann::json SgdModel::payload_json() const {
    return {{"outputs", outputs_},       {"encoded_dim", encoded_dim_},
            {"learning_rate", lr_},      {"standardize", standardize_},
            {"weights", w_},             {"mean", mean_},
            {"m2", m2_},                 {"stat_n", stat_n_}};
}

std::unique_ptr<Model> SgdModel::from_payload(const nlohmann::json& j, const StreamSchema& schema) {
    const TargetKind tk = schema.target().kind;
    auto out = std::unique_ptr<SgdModel>(new SgdModel(
        schema, tk, tk == TargetKind::klass ? schema.target().num_classes : 1,
        j.at("learning_rate").get<double>(), j.at("standardize").get<bool>()));
    if (j.at("encoded_dim").get<int>() != out->encoded_dim_ ||
        j.at("outputs").get<int>() != out->outputs_)
        throw ParseError("sgd payload does not match the schema");
    out->w_ = j.at("weights").get<std::vector<std::vector<double>>>();
    out->mean_ = j.at("mean").get<std::vector<double>>();
    out->m2_ = j.at("m2").get<std::vector<double>>();
    out->stat_n_ = j.at("stat_n").get<double>();
    if (out->w_.size() != static_cast<std::size_t>(out->outputs_) ||
        out->mean_.size() != static_cast<std::size_t>(out->encoded_dim_) ||
        out->m2_.size() != out->mean_.size())
        throw ParseError("sgd payload has inconsistent shapes");
    for (const auto& wk : out->w_)
        if (wk.size() != static_cast<std::size_t>(out->encoded_dim_) + 1)
            throw ParseError("sgd payload has inconsistent shapes");
    return out;
}

// ----------------------------------------------------------- hoeffding tree

HoeffdingTreeModel::HoeffdingTreeModel(const StreamSchema& schema, TreeConfig config,
                                       std::uint64_t seed)
    : tree_(schema, schema.target().kind,
            schema.target().kind == TargetKind::klass ? schema.target().num_classes : 0, config,
            FeatureSubset::full(schema.dim()).bits(), seed) {}

HoeffdingTreeModel::HoeffdingTreeModel(IncrementalTree tree) : tree_(std::move(tree)) {}

Prediction HoeffdingTreeModel::predict(const Instance& x) const {
    if (tree_.samples_seen() == 0) {
        // Prior before any data: uniform class belief / zero estimate.
        if (tree_.target_kind() == TargetKind::klass)
            return Prediction::probabilities(std::vector<double>(
                static_cast<std::size_t>(tree_.num_classes()),
                1.0 / static_cast<double>(tree_.num_classes())));
        return Prediction::real(0.0);
    }
    return tree_.predict(x);
}

void HoeffdingTreeModel::learn_one(const LabeledSample& s) { tree_.learn_one(s.x, s.y); }

std::unique_ptr<Model> HoeffdingTreeModel::clone() const {
    return std::unique_ptr<Model>(new HoeffdingTreeModel(tree_));
}

TargetKind HoeffdingTreeModel::target_kind() const { return tree_.target_kind(); }

nlohmann::json HoeffdingTreeModel::payload_json() const { return tree_.to_json(); }

std::unique_ptr<Model> HoeffdingTreeModel::from_payload(const nlohmann::json& j,
                                                        std::uint64_t seed) {
    return std::unique_ptr<Model>(new HoeffdingTreeModel(IncrementalTree::from_json(j, seed)));
}

// ------------------------------------------------------------------ frozen

FrozenModel::FrozenModel(std::unique_ptr<Model> inner) : inner_(std::move(inner)) {
    if (!inner_) throw ConfigError("frozen wrapper needs a model");
}

Prediction FrozenModel::predict(const Instance& x) const { return inner_->predict(x); }

void FrozenModel::learn_one(const LabeledSample&) {
    throw StateError("frozen model cannot learn");
}

std::unique_ptr<Model> FrozenModel::clone() const {
    return std::make_unique<FrozenModel>(inner_->clone());
}

TargetKind FrozenModel::target_kind() const { return inner_->target_kind(); }

nlohmann::json FrozenModel::payload_json() const {
    return {{"inner", model_to_json(*inner_)}};
}

// ---------------------------------------------------------------- counting

CountingModel::CountingModel(const Model& inner) : inner_(&inner) {}

Prediction CountingModel::predict(const Instance& x) const {
    ++predicts_;
    return inner_->predict(x);
}

void CountingModel::learn_one(const LabeledSample&) {
    throw StateError("counting wrapper is read-only; learn on the wrapped model");
}

std::unique_ptr<Model> CountingModel::clone() const {
    return std::make_unique<CountingModel>(*inner_);
}

TargetKind CountingModel::target_kind() const { return inner_->target_kind(); }

nlohmann::json CountingModel::payload_json() const {
    throw StateError("counting wrapper is not serializable");
}

} // namespace streamsage
