#include "ppdsim/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace ppdsim {

namespace {

// 3x3 helper used only for the augmented-matrix exponential.
struct Mat3 {
    double a[3][3] = {};

    static Mat3 identity() {
        Mat3 m;
        for (int i = 0; i < 3; ++i) m.a[i][i] = 1.0;
        return m;
    }

    Mat3 mul(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += a[i][k] * o.a[k][j];
                r.a[i][j] = s;
            }
        return r;
    }
};

double norm1(const Mat3& m) {
    double best = 0.0;
    for (int j = 0; j < 3; ++j) {
        double col = 0.0;
        for (int i = 0; i < 3; ++i) col += std::abs(m.a[i][j]);
        best = std::max(best, col);
    }
    return best;
}

// Scaling-and-squaring with a degree-12 Taylor evaluation. The matrix is
// scaled until its 1-norm is below 2^-5, where the truncation error is
// far under the 1e-12 relative target.
Mat3 expm(Mat3 x) {
    const double norm = norm1(x);
    if (!std::isfinite(norm)) throw NonFinite("matrix exponential of non-finite matrix");

    int squarings = 0;
    if (norm > 0.03125) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.03125)));
        if (squarings > 64) throw NonFinite("matrix exponential overflow");
        const double scale = std::ldexp(1.0, -squarings);
        for (auto& row : x.a)
            for (double& v : row) v *= scale;
    }

    Mat3 sum = Mat3::identity();
    Mat3 term = Mat3::identity();
    for (int k = 1; k <= 12; ++k) {
        term = term.mul(x);
        const double inv = 1.0 / k;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                term.a[i][j] *= inv;
                sum.a[i][j] += term.a[i][j];
            }
    }

    for (int s = 0; s < squarings; ++s) sum = sum.mul(sum);

    for (const auto& row : sum.a)
        for (double v : row)
            if (!std::isfinite(v)) throw NonFinite("matrix exponential overflow");
    return sum;
}

struct GaussRule {
    std::array<double, 64> node;    // abscissae on [-1, 1]
    std::array<double, 64> weight;
};

// 64-node Gauss-Legendre rule, nodes found by Newton iteration on the
// Legendre recurrence.
const GaussRule& gauss64() {
    static const GaussRule rule = [] {
        GaussRule r{};
        constexpr int n = 64;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            r.node[i] = -x;
            r.node[n - 1 - i] = x;
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.weight[i] = w;
            r.weight[n - 1 - i] = w;
        }
        return r;
    }();
    return rule;
}

}  // namespace

void CircuitParams::validate() const {
    if (!(r > 0.0)) throw std::invalid_argument("switch resistance r must be > 0");
    if (!(R1 > 0.0)) throw std::invalid_argument("measurement load R1 must be > 0");
    if (!(R2 > 0.0)) throw std::invalid_argument("resistive load R2 must be > 0");
    if (!(C1 > 0.0)) throw std::invalid_argument("router capacitor C1 must be > 0");
    if (!(C2 > 0.0)) throw std::invalid_argument("load capacitor C2 must be > 0");
    if (!(E >= 0.0)) throw std::invalid_argument("source voltage E must be >= 0");
    if (!(v_diode >= 0.0)) throw std::invalid_argument("diode drop must be >= 0");
}

Mode mode_for(bool input_one, bool output_one) {
    if (input_one) return output_one ? Mode::P11 : Mode::P10;
    return output_one ? Mode::P01 : Mode::P00;
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::P11: return "P11";
        case Mode::P00: return "P00";
        case Mode::P10: return "P10";
        case Mode::P01: return "P01";
    }
    throw UnknownOperation("invalid mode");
}

Mat2 Mat2::identity() {
    Mat2 m;
    m.a[0][0] = m.a[1][1] = 1.0;
    return m;
}

StateVector Mat2::apply(const StateVector& x) const {
    return {a[0][0] * x.v1 + a[0][1] * x.v2, a[1][0] * x.v1 + a[1][1] * x.v2};
}

Mat2 Mat2::mul(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.a[i][j] = a[i][0] * o.a[0][j] + a[i][1] * o.a[1][j];
    return r;
}

ContinuousModel mode_matrices(const CircuitParams& p, Mode mode) {
    p.validate();

    const double a1 = 1.0 / (p.r * p.C1);
    const double a2 = 1.0 / (p.r * p.C2);
    const double d = p.r / p.R1 + 2.0;  // divider seen from the midpoint node
    const double g = 1.0 / (p.R2 * p.C2);

    ContinuousModel m;
    switch (mode) {
        case Mode::P11:
            m.M.a[0][0] = a1 * (1.0 / d - 2.0);
            m.M.a[0][1] = a1;
            m.M.a[1][0] = a2;
            m.M.a[1][1] = -a2 * (1.0 + p.r / p.R2);
            m.N = {a1 / d, 0.0};
            break;
        case Mode::P00:
            m.M.a[1][1] = -g;
            break;
        case Mode::P10:
            m.M.a[0][0] = -a1 * (1.0 + p.r / p.R1) / d;
            m.M.a[1][1] = -g;
            m.N = {a1 / d, 0.0};
            break;
        case Mode::P01:
            m.M.a[0][0] = -a1;
            m.M.a[0][1] = a1;
            m.M.a[1][0] = a2;
            m.M.a[1][1] = -a2 * (1.0 + p.r / p.R2);
            break;
    }
    return m;
}

DiscreteModel discretize(const ContinuousModel& model, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("slot duration T must be > 0");

    Mat3 aug;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) aug.a[i][j] = model.M.a[i][j] * T;
        aug.a[i][2] = model.N[i] * T;
    }
    const Mat3 e = expm(aug);

    DiscreteModel dm;
    dm.T = T;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) dm.A.a[i][j] = e.a[i][j];
        dm.B[i] = e.a[i][2];
    }
    return dm;
}

StateVector step(const DiscreteModel& dm, const StateVector& xi, double E) {
    StateVector out = dm.A.apply(xi);
    out.v1 += dm.B[0] * E;
    out.v2 += dm.B[1] * E;
    return out;
}

double load_voltage(const StateVector& xi) { return xi.v2; }

double capacitor_energy(double v, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("capacitance must be > 0");
    return 0.5 * c * v * v;
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& other) {
    source_in += other.source_in;
    stored_delta += other.stored_delta;
    dissipated += other.dissipated;
    load_delivered += other.load_delivered;
    return *this;
}

double EnergyLedger::imbalance() const {
    return std::abs(source_in - stored_delta - dissipated);
}

double effective_source(const CircuitParams& params, Mode mode) {
    return source_connected(mode) ? params.E - params.v_diode : params.E;
}

SlotEnergyModel::SlotEnergyModel(const CircuitParams& params, double T)
    : params_(params), T_(T) {
    params_.validate();
    const GaussRule& rule = gauss64();
    for (Mode mode : kAllModes) {
        const auto idx = static_cast<std::size_t>(mode);
        const ContinuousModel cm = mode_matrices(params_, mode);
        discrete_[idx] = discretize(cm, T);
        for (int i = 0; i < 64; ++i) {
            const double t = 0.5 * T * (rule.node[i] + 1.0);
            const DiscreteModel at_node = discretize(cm, t);
            nodes_[idx][i] = NodeProp{at_node.A, at_node.B};
        }
    }
}

const DiscreteModel& SlotEnergyModel::discrete(Mode mode) const {
    return discrete_[static_cast<std::size_t>(mode)];
}

StateVector SlotEnergyModel::state_at_node(Mode mode, const StateVector& xi0,
                                           int node) const {
    const NodeProp& np = nodes_[static_cast<std::size_t>(mode)][node];
    const double e = effective_source(params_, mode);
    StateVector xi = np.A.apply(xi0);
    xi.v1 += np.B[0] * e;
    xi.v2 += np.B[1] * e;
    return xi;
}

EnergyLedger SlotEnergyModel::ledger(Mode mode, const StateVector& xi_before) const {
    const GaussRule& rule = gauss64();
    const CircuitParams& p = params_;
    const double e_eff = effective_source(p, mode);
    const double d = p.r / p.R1 + 2.0;

    double source_in = 0.0;
    double dissipated = 0.0;
    double load = 0.0;
    for (int i = 0; i < 64; ++i) {
        const StateVector xi = state_at_node(mode, xi_before, i);
        const double w = rule.weight[i] * 0.5 * T_;

        double diss = xi.v2 * xi.v2 / p.R2;
        load += w * diss;

        if (source_connected(mode)) {
            const double vm = (e_eff + xi.v1) / d;
            const double i_src = (e_eff - vm) / p.r;
            const double i_in = (vm - xi.v1) / p.r;
            source_in += w * p.E * i_src;
            diss += i_src * i_src * p.r + vm * vm / p.R1 + i_in * i_in * p.r +
                    p.v_diode * i_src;
        }
        if (output_connected(mode)) {
            const double i_out = (xi.v1 - xi.v2) / p.r;
            diss += i_out * i_out * p.r;
        }
        dissipated += w * diss;
    }

    const StateVector xi_after = step(discrete(mode), xi_before, e_eff);
    const double stored_delta =
        capacitor_energy(xi_after.v1, p.C1) - capacitor_energy(xi_before.v1, p.C1) +
        capacitor_energy(xi_after.v2, p.C2) - capacitor_energy(xi_before.v2, p.C2);

    EnergyLedger out{source_in, stored_delta, dissipated, load};

    const double scale = std::max({std::abs(out.source_in), std::abs(out.stored_delta),
                                   std::abs(out.dissipated)});
    if (out.imbalance() > std::max(kLedgerRelTol * scale, 1e-12))
        throw BalanceViolation("slot energy balance off by " +
                               std::to_string(out.imbalance()) + " J in mode " +
                               mode_name(mode));
    return out;
}

double SlotEnergyModel::output_port_energy(Mode mode,
                                           const StateVector& xi_before) const {
    if (!output_connected(mode)) return 0.0;
    const GaussRule& rule = gauss64();
    double energy = 0.0;
    for (int i = 0; i < 64; ++i) {
        const StateVector xi = state_at_node(mode, xi_before, i);
        const double i_out = (xi.v1 - xi.v2) / params_.r;
        energy += rule.weight[i] * 0.5 * T_ * i_out * xi.v2;
    }
    return energy;
}

EnergyLedger energy_ledger(Mode mode, const CircuitParams& params,
                           const StateVector& xi_before, const StateVector& xi_after,
                           double T) {
    SlotEnergyModel model(params, T);
    EnergyLedger out = model.ledger(mode, xi_before);
    // Honor the caller-supplied end state for the stored-energy delta.
    const double stored =
        capacitor_energy(xi_after.v1, params.C1) -
        capacitor_energy(xi_before.v1, params.C1) +
        capacitor_energy(xi_after.v2, params.C2) -
        capacitor_energy(xi_before.v2, params.C2);
    out.stored_delta = stored;
    return out;
}

namespace {

nlohmann::json mat2_json(const Mat2& m) {
    return nlohmann::json::array({nlohmann::json::array({m.a[0][0], m.a[0][1]}),
                                  nlohmann::json::array({m.a[1][0], m.a[1][1]})});
}

Mat2 mat2_from(const nlohmann::json& j) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) m.a[i][k] = j.at(i).at(k).get<double>();
    return m;
}

}  // namespace

std::string ContinuousModel::to_json() const {
    return nlohmann::json{{"M", mat2_json(M)}, {"N", {N[0], N[1]}}}.dump();
}

ContinuousModel ContinuousModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ContinuousModel m;
    m.M = mat2_from(j.at("M"));
    m.N = {j.at("N").at(0).get<double>(), j.at("N").at(1).get<double>()};
    return m;
}

std::string DiscreteModel::to_json() const {
    return nlohmann::json{{"A", mat2_json(A)}, {"B", {B[0], B[1]}}, {"T", T}}.dump();
}

DiscreteModel DiscreteModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    DiscreteModel m;
    m.A = mat2_from(j.at("A"));
    m.B = {j.at("B").at(0).get<double>(), j.at("B").at(1).get<double>()};
    m.T = j.at("T").get<double>();
    return m;
}

}  // namespace ppdsim
