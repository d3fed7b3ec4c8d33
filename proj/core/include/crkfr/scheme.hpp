#pragma once

#include <string>
#include <string_view>

#include "crkfr/basis.hpp"

namespace crkfr {

enum class Dissipation { D1, D2, DCSX };
enum class TraceMode { EA, AE };
enum class BlendKind { None, FO, MH };
enum class BoundaryKind { Periodic, Inflow, Outflow, Wall, MixedHllc, Problem };
enum class BoundaryTreatment { InterfaceGhost, GhostElement };
enum class DtSpeed { Mean, NodalMax };

std::string_view to_string(Dissipation d);
std::string_view to_string(TraceMode m);
std::string_view to_string(BlendKind b);
std::string_view to_string(BoundaryKind k);
std::string_view to_string(BoundaryTreatment t);
std::string_view to_string(DtSpeed s);

Dissipation parse_dissipation(std::string_view s);
TraceMode parse_trace_mode(std::string_view s);
BlendKind parse_blend_kind(std::string_view s);
BoundaryKind parse_boundary_kind(std::string_view s);
BoundaryTreatment parse_boundary_treatment(std::string_view s);
DtSpeed parse_dt_speed(std::string_view s);

/// Smoothness indicator constants.
struct IndicatorConfig {
  double alpha_min = 1e-3;
  double alpha_max = 1.0;
  double sharpness = 9.21024;
  double threshold_scale = 0.5;
  double threshold_exponent = 1.8;
  bool smooth = true;
};

struct LimiterOptions {
  BlendKind blend = BlendKind::None;
  bool flux_limiter = false;
  bool scaling_limiter = false;
  IndicatorConfig indicator;
  int mh_max_halvings = 10;
};

/// Boundary kinds for the four sides (x-left, x-right, y-bottom, y-top).
struct BoundarySpec {
  BoundaryKind kinds[4] = {BoundaryKind::Periodic, BoundaryKind::Periodic, BoundaryKind::Periodic,
                           BoundaryKind::Periodic};
  BoundaryTreatment treatment = BoundaryTreatment::InterfaceGhost;
};

struct SchemeOptions {
  int degree = 3;
  PointSet points = PointSet::GL;
  std::string tableau;  // empty selects the order degree+1 tableau
  Dissipation dissipation = Dissipation::D2;
  TraceMode trace = TraceMode::EA;
  double cfl_safety = 0.98;
  double cfl_override = 0.0;  // > 0 replaces the tabulated CFL(N)
  DtSpeed dt_speed = DtSpeed::Mean;
  bool dt_include_ghost = false;
  int threads = 0;  // 0 keeps the OpenMP default (capped by CRKFR_THREADS)
};

}  // namespace crkfr
