#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "monotone_mas/system.hpp"

namespace mas {

/// Interaction topology of a multi-agent system. Edge (i, j) means the local
/// rule f_i reads x_j, so N_i = {j : (i, j) is an edge}. Indices are 0-based;
/// self-loops are not allowed (self-interaction is a model parameter).
class Digraph {
public:
    Digraph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t size() const noexcept { return neighbors_.size(); }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
    bool has_edge(std::size_t i, std::size_t j) const;
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    std::size_t edge_count() const;

private:
    std::vector<std::vector<std::size_t>> neighbors_;  // sorted
};

/// Parameters of the discrete-time SIS recurrence.
/// beta[i][k] is the infection rate from neighbors(i)[k]; beta_self[i] is
/// beta_ii.
struct SisParams {
    double h = 0.0;
    std::vector<double> delta;
    std::vector<std::vector<double>> beta;
    std::vector<double> beta_self;

    static SisParams uniform(const Digraph& g, double h, double delta, double beta, double beta_self = 0.0);

    /// Sum of beta_ij over j != i.
    double beta_sum(std::size_t i) const;
};

/// f_i(x) = x_i + h [ delta_i (1 - x_i) - x_i sum_{j in N_i} beta_ij (1 - x_j) ]
/// (beta_ii, when non-zero, enters the sum as j = i). Domain box [0, 1]^n.
SystemMap make_sis(const Digraph& g, const SisParams& p);

/// Verdicts of the inequalities that certify the SIS stability hypotheses
/// for one node, with beta = sum_{j != i} beta_ij.
struct SisNodeConditions {
    bool c16 = false;  ///< h delta <= 1 and h beta <= 1
    bool c17 = false;  ///< h beta_ii <= (sqrt(1 - h beta) + sqrt(h delta))^2
    bool c18 = false;  ///< h beta_ii < 1 - h delta - h beta
    bool c19 = false;  ///< delta >= beta
    bool c20 = false;  ///< h delta + h beta < 1 - h beta_ii and h beta <= 0.5
    /// Smallest |lhs - rhs| over all the inequalities above.
    double min_slack = 0.0;

    bool all_16_19() const { return c16 && c17 && c18 && c19; }
};

/// AsStated keeps the mixed <= / < of each inequality; Strict turns every
/// <= and >= into a strict comparison.
enum class Inequalities { AsStated, Strict };

SisNodeConditions sis_node_conditions(double h, double delta, double beta, double beta_self,
                                      Inequalities mode = Inequalities::AsStated);

struct SisConditionsReport {
    std::vector<SisNodeConditions> nodes;
    bool c16 = true, c17 = true, c18 = true, c19 = true, c20 = true;

    bool all_16_19() const { return c16 && c17 && c18 && c19; }
};

SisConditionsReport sis_conditions(const Digraph& g, const SisParams& p);

/// f_i(x) = x_i + eps_i sum_{j in N_i} atan(x_j - x_i). Domain box [0, 10]^n.
SystemMap make_arctan(const Digraph& g, const std::vector<double>& eps);

/// x -> A x for entrywise non-negative A. Domain box [0, 1]^n.
SystemMap make_linear(const Eigen::MatrixXd& a);

/// The three maps on the plane separating the order-preservation notions:
/// constant [1, 1], swap [y, x] and [sqrt(x) + y, y].
struct Counterexamples {
    SystemMap constant;
    SystemMap swap;
    SystemMap sqrt_shift;
};

Counterexamples make_counterexamples();

}  // namespace mas
