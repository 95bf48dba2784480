#include "subsidylab/fixtures.hpp"

#include "subsidylab/system_function.hpp"

namespace subsidylab {

MaintenanceGame example1_game() {
  return make_maintenance_game(
      {0.3, 0.3}, {0.5, 0.5},
      SystemFunction::from_sp(
          2, SpNode::series({SpNode::leaf(0), SpNode::leaf(1)})));
}

MaintenanceGame example2_game() {
  return make_maintenance_game(
      {0.3, 0.3}, {0.4, 0.1},
      SystemFunction::from_sp(
          2, SpNode::series({SpNode::leaf(0), SpNode::leaf(1)})));
}

CostSharingGame example3_game() {
  return make_cost_sharing_game(
      2,
      {CsgAction{"A", {0, 1}}, CsgAction{"B", {1}}, CsgAction{"C", {1}},
       CsgAction{"D", {0}}},
      {CsgWorld{0.5, {5.0, 2.0, 6.0, 4.0}},
       CsgWorld{0.5, {5.0, 6.0, 2.0, 4.0}}});
}

}  // namespace subsidylab
