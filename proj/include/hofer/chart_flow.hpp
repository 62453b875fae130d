#pragma once

#include "hofer/decomposition.hpp"
#include "hofer/field.hpp"
#include "hofer/flow.hpp"

namespace hofer {

inline ChartFlowSpec<double> chart_flow_spec(const ChartField& field, double step, double t_final) {
  ChartFlowSpec<double> spec;
  spec.chart = field.chart().cylinder ? ChartKind::cylinder : ChartKind::plane;
  spec.hamiltonian = [field](const Point2<double>& x) { return field.value(x); };
  spec.gradient = [field](const Point2<double>& x) { return Point2<double>(field.gradient(x)); };
  spec.step = step;
  spec.t_final = t_final;
  return spec;
}

struct SplitSpecs {
  ChartFlowSpec<double> k;   // rho(H)
  ChartFlowSpec<double> h0;  // H - rho(H)
};

inline SplitSpecs split_spec(const ChartFlowSpec<double>& h, const CutoffProfile& rho) {
  return {composed_spec<double>(
              h, [rho](double s) { return rho(s); }, [rho](double s) { return rho.derivative(s); }),
          composed_spec<double>(
              h, [rho](double s) { return s - rho(s); }, [rho](double s) { return 1.0 - rho.derivative(s); })};
}

}  // namespace hofer
