#include "ppdsim/correction.hpp"

#include <cmath>
#include <stdexcept>

namespace ppdsim {

namespace {

Mode through_mode(LogicValue v) {
    return v == LogicValue::One ? Mode::P11 : Mode::P00;
}

Mode reference_mode(LogicValue input, LogicValue demand, SelectorTarget target) {
    return through_mode(target == SelectorTarget::Input ? input : demand);
}

StateVector step_mode(const InternalModel& im, Mode m, const StateVector& xi) {
    return step(im.of(m), xi, effective_source(im.params, m));
}

}  // namespace

InternalModel make_internal_model(const CircuitParams& params, double T) {
    InternalModel im;
    im.params = params;
    for (Mode m : kAllModes)
        im.modes[static_cast<std::size_t>(m)] = discretize(mode_matrices(params, m), T);
    return im;
}

PredictedErrors predict(LogicValue input, const TrackingState& ts,
                        const InternalModel& im, LogicValue demand,
                        SelectorTarget target) {
    const StateVector xi_l_next =
        step_mode(im, reference_mode(input, demand, target), ts.xi_l);

    const bool one = input == LogicValue::One;
    const StateVector keep =
        step_mode(im, one ? Mode::P11 : Mode::P00, ts.xi_r);
    const StateVector flip =
        step_mode(im, one ? Mode::P10 : Mode::P01, ts.xi_r);

    return PredictedErrors{std::abs(load_voltage(keep) - load_voltage(xi_l_next)),
                           std::abs(load_voltage(flip) - load_voltage(xi_l_next))};
}

UnaryOp select_operation(const PredictedErrors& pe) {
    return pe.err_flip < pe.err_keep ? UnaryOp::Not : UnaryOp::Through;
}

TrackingState advance(TrackingState ts, LogicValue input, UnaryOp chosen,
                      const InternalModel& im, LogicValue demand,
                      SelectorTarget target) {
    const LogicValue output = eval_unary(chosen, input);
    ts.xi_r = step_mode(im, mode_for(to_bool(input), to_bool(output)), ts.xi_r);
    ts.xi_l = step_mode(im, reference_mode(input, demand, target), ts.xi_l);
    ++ts.k;
    return ts;
}

TrackingTrace run_tracking(const std::vector<LogicValue>& demand,
                           const std::vector<LogicValue>& inputs,
                           const InternalModel& im, const TrackingState& ts0,
                           bool use_algorithm, SelectorTarget target) {
    if (demand.size() != inputs.size())
        throw std::invalid_argument("demand and input sequences differ in length");
    if (demand.empty()) throw EmptyRun("tracking run over zero slots");

    TrackingTrace trace;
    trace.rows.reserve(demand.size());

    TrackingState ts = ts0;
    double total = 0.0;
    for (std::size_t k = 0; k < demand.size(); ++k) {
        const LogicValue i = inputs[k];
        const LogicValue d = demand[k];

        UnaryOp chosen;
        if (use_algorithm) {
            chosen = select_operation(predict(i, ts, im, d, target));
        } else {
            // The router follows the demand's logic directly.
            chosen = i == d ? UnaryOp::Through : UnaryOp::Not;
        }

        ts = advance(ts, i, chosen, im, d, target);

        TraceRow row;
        row.k = static_cast<SlotIndex>(k);
        row.input = i;
        row.demand = d;
        row.chosen = chosen;
        row.xi_r = ts.xi_r;
        row.xi_l = ts.xi_l;
        row.abs_err = std::abs(load_voltage(ts.xi_r) - load_voltage(ts.xi_l));
        total += row.abs_err;
        trace.rows.push_back(row);
    }

    trace.avg_abs_err = total / static_cast<double>(trace.rows.size());
    return trace;
}

}  // namespace ppdsim
