#ifndef STREAMSAGE_MODEL_HPP
#define STREAMSAGE_MODEL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "streamsage/predictor.hpp"
#include "streamsage/schema.hpp"
#include "streamsage/tree.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

// Incremental model behind a uniform predict/learn interface. predict never
// mutates; freeze() deep-copies into an immutable snapshot whose predictions
// stay reproducible while the live model keeps learning.
class Model : public Predictor {
public:
    virtual void learn_one(const LabeledSample& s) = 0;
    virtual std::unique_ptr<Model> clone() const = 0;
    virtual std::string kind_name() const = 0;
    virtual TargetKind target_kind() const = 0;
    virtual nlohmann::json payload_json() const = 0;
    // False for frozen snapshots; the harness skips learning when false.
    virtual bool trainable() const { return true; }

    std::shared_ptr<const Model> freeze() const { return std::shared_ptr<const Model>(clone()); }
};

// Always predicts the same value; learning is a no-op.
class ConstantModel : public Model {
public:
    explicit ConstantModel(Prediction value);

    Prediction predict(const Instance& x) const override;
    void learn_one(const LabeledSample& s) override;
    std::unique_ptr<Model> clone() const override;
    std::string kind_name() const override { return "constant"; }
    TargetKind target_kind() const override;
    nlohmann::json payload_json() const override;
    static std::unique_ptr<Model> from_payload(const nlohmann::json& j);

private:
    Prediction value_;
};

// Linear model over one-hot encoded features, trained by online gradient
// steps. Numeric inputs are standardized with running statistics (enabled by
// default) so coordinates with very different scales still learn.
class SgdModel : public Model {
public:
    // Softmax classifier, log-loss gradient.
    static std::unique_ptr<SgdModel> logistic(const StreamSchema& schema, double learning_rate,
                                              bool standardize);
    // Single-output regressor, squared-loss gradient.
    static std::unique_ptr<SgdModel> linear(const StreamSchema& schema, double learning_rate,
                                            bool standardize);

    Prediction predict(const Instance& x) const override;
    void learn_one(const LabeledSample& s) override;
    std::unique_ptr<Model> clone() const override;
    std::string kind_name() const override;
    TargetKind target_kind() const override { return target_kind_; }
    nlohmann::json payload_json() const override;
    static std::unique_ptr<Model> from_payload(const nlohmann::json& j, const StreamSchema& schema);

    const std::vector<std::vector<double>>& weights() const { return w_; }

private:
    SgdModel(const StreamSchema& schema, TargetKind tk, int outputs, double lr, bool standardize);

    std::vector<double> encode(const Instance& x) const; // one-hot + standardized, bias last
    void standardize_update(const Instance& x);

    StreamSchema schema_;
    TargetKind target_kind_;
    int outputs_;     // classes for klass, 1 for real
    int encoded_dim_; // without bias
    double lr_;
    bool standardize_;
    std::vector<std::vector<double>> w_; // outputs x (encoded_dim + 1)
    // running statistics per encoded coordinate (numerics only)
    std::vector<double> mean_, m2_;
    double stat_n_ = 0.0;
};

// Incremental decision tree model (classification or regression).
class HoeffdingTreeModel : public Model {
public:
    HoeffdingTreeModel(const StreamSchema& schema, TreeConfig config, std::uint64_t seed);

    Prediction predict(const Instance& x) const override;
    void learn_one(const LabeledSample& s) override;
    std::unique_ptr<Model> clone() const override;
    std::string kind_name() const override { return "hoeffding_tree"; }
    TargetKind target_kind() const override;
    nlohmann::json payload_json() const override;
    static std::unique_ptr<Model> from_payload(const nlohmann::json& j, std::uint64_t seed);

    const IncrementalTree& tree() const { return tree_; }

private:
    explicit HoeffdingTreeModel(IncrementalTree tree);
    IncrementalTree tree_;
};

// Immutable snapshot wrapper: predictions pass through, learning throws.
class FrozenModel : public Model {
public:
    explicit FrozenModel(std::unique_ptr<Model> inner);

    Prediction predict(const Instance& x) const override;
    void learn_one(const LabeledSample& s) override;
    std::unique_ptr<Model> clone() const override;
    std::string kind_name() const override { return "frozen"; }
    TargetKind target_kind() const override;
    nlohmann::json payload_json() const override;
    bool trainable() const override { return false; }

    const Model& inner() const { return *inner_; }

private:
    std::unique_ptr<Model> inner_;
};

// Pass-through wrapper that counts predict and learn calls; used for cost
// accounting of explanation methods.
class CountingModel : public Model {
public:
    explicit CountingModel(const Model& inner);

    Prediction predict(const Instance& x) const override;
    void learn_one(const LabeledSample& s) override;
    std::unique_ptr<Model> clone() const override;
    std::string kind_name() const override { return "counting"; }
    TargetKind target_kind() const override;
    nlohmann::json payload_json() const override;

    std::uint64_t predict_calls() const { return predicts_; }
    void reset_counts() { predicts_ = 0; }

private:
    const Model* inner_;
    mutable std::uint64_t predicts_ = 0;
};

// Model construction recipe. `text` grammar (comma-separated key=value after
// the kind): "constant:0.7,0.3" | "sgd_logistic[,lr=0.05][,standardize=0]"
// | "sgd_linear[,lr=0.01][,standardize=0]" | "hoeffding[,grace=200]
// [,delta=1e-7][,depth=6][,splits=30][,adaptation=0]" | "file:PATH[,frozen]".
struct ModelSpec {
    std::string kind;                    // constant | sgd_logistic | sgd_linear |
                                         // hoeffding_tree | file
    std::vector<double> constant_values; // constant: class probabilities or one real
    double learning_rate = 0.01;
    bool standardize = true;
    TreeConfig tree;
    std::string path;                    // file
    bool frozen = false;

    static ModelSpec parse(const std::string& text);
};

std::unique_ptr<Model> model_build(const ModelSpec& spec, const StreamSchema& schema,
                                   std::uint64_t seed);

// Versioned JSON round-trip. Schema and seed are needed to rebuild
// structure-dependent models.
nlohmann::json model_to_json(const Model& model);
std::unique_ptr<Model> model_from_json(const nlohmann::json& j, const StreamSchema& schema,
                                       std::uint64_t seed);
void model_save(const Model& model, const std::string& path);
std::unique_ptr<Model> model_load(const std::string& path, const StreamSchema& schema,
                                  std::uint64_t seed);

} // namespace streamsage

#endif
