#include "fri/context.hpp"

#include <stdexcept>

namespace fri {

GraphReturns::GraphReturns(const GraphSet& graph, const ReturnPanel& returns, std::size_t epsilon)
    : graph_(&graph), returns_(&returns), corr_(returns, epsilon) {
  if (!(graph.calendar() == returns.calendar()))
    throw std::invalid_argument("graph calendar does not match the return panel calendar");
  column_.reserve(graph.num_nodes());
  for (const auto& node : graph.nodes()) {
    auto idx = returns.ticker_index(node);
    if (!idx) throw std::invalid_argument("graph node " + node + " has no return series");
    column_.push_back(*idx);
  }
}

}  // namespace fri
