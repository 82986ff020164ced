#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfpack/graph.hpp"

namespace tfpack {

/// The fixed tree T on template vertices {0..t-1}.
///
/// Construction rejects anything that is not a tree (forests, cycles,
/// repeated edges) instead of repairing it. Edges are normalized to i < j
/// and sorted; that order is the canonical super-edge order everywhere.
class TreeTemplate {
 public:
  /// The single-vertex tree.
  TreeTemplate() : TreeTemplate(1, {}) {}
  TreeTemplate(std::size_t t, std::vector<Edge> edges);

  static TreeTemplate path(std::size_t t);
  static TreeTemplate star(std::size_t t);

  std::size_t size() const { return t_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }

  /// Unlabeled canonical form rooted at the center (smaller of the two
  /// encodings for bicentral trees).
  const std::string& canonical_form() const { return canonical_; }

  friend bool operator==(const TreeTemplate& a, const TreeTemplate& b) {
    return a.t_ == b.t_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t t_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::string canonical_;
};

/// True iff a and b are isomorphic as unlabeled trees.
bool ahu_isomorphic(const TreeTemplate& a, const TreeTemplate& b);

/// Tree file: "t" then t-1 lines "i j".
TreeTemplate read_tree(std::istream& in);
TreeTemplate read_tree(const std::filesystem::path& path);
void write_tree(const TreeTemplate& tree, std::ostream& out);

/// One copy of T inside the host graph. When produced by assemble_factor,
/// vertices[k] is the host vertex playing template vertex k.
struct TreeCopy {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  friend bool operator==(const TreeCopy&, const TreeCopy&) = default;
};

struct TFactor {
  std::vector<TreeCopy> copies;

  friend bool operator==(const TFactor&, const TFactor&) = default;
};

enum class Violation {
  kNone,
  kSizeMismatch,      // copy count != n/t
  kBadCopyShape,      // copy without t vertices / t-1 edges, or vertex id >= n
  kNonDisjoint,       // vertex used by two copies (or twice in one)
  kNotSpanning,       // some host vertex left uncovered
  kEdgeOutsideCopy,   // copy edge touching a vertex outside that copy
  kNonSubgraph,       // copy edge absent from the host graph
  kNotIsomorphic,     // copy edges do not form a tree isomorphic to T
};

const char* to_string(Violation v);

struct Verdict {
  Violation violation = Violation::kNone;
  std::size_t copy = 0;
  std::optional<Vertex> vertex;
  std::optional<Edge> edge;
  std::string message;

  bool ok() const { return violation == Violation::kNone; }
};

/// Checks that f is a T-factor of g. Throws DivisibilityError if t does not
/// divide n; every other failure is returned as a Verdict.
Verdict verify_tfactor(const Graph& g, const TreeTemplate& tree, const TFactor& f);

/// Builds the T-factor formed by one perfect matching per tree edge.
///
/// parts[k] holds the host vertices of template vertex k (all parts the same
/// size nu). matchings[e] is a perfect matching between the parts of
/// tree.edges()[e]; pairs may be given in either orientation. Throws
/// InvalidArgument when a matching is not perfect or joins the wrong parts.
TFactor assemble_factor(std::span<const std::vector<Vertex>> parts, const TreeTemplate& tree,
                        std::span<const std::vector<Edge>> matchings);

}  // namespace tfpack
