#pragma once

#include <vector>

#include "polylab/polymer.hpp"

namespace polylab {

// Depth-first traversal of nearest-neighbour paths started at a (relative)
// origin and restricted to the forward cone. Subtrees leaving the forward cone
// are pruned: once a vertex falls outside origin + Y, no extension can be
// cone-confined.
//
// Incremental bookkeeping per vertex k of the current path:
//   back_ok[k]  : gamma_k - gamma_j in Y for all j < k. Together with forward
//                 pruning this makes the prefix 0..k cone-confined.
//   fwd_viol[k] : number of later vertices j > k with gamma_j - gamma_k not in Y.
// k (0 < k < depth) is a break point iff back_ok[k] && fwd_viol[k] == 0, and the
// prefix is irreducible iff it is confined and has no break point.
//
// Visitor contract:
//   bool push(const Point& rel_vertex, int depth);   // false prunes the subtree
//   void pop();
//   void at_node(const Point& rel_endpoint, int depth, bool confined, bool irreducible);
template <class Visitor>
class ConeWalker {
   public:
    ConeWalker(const ConeSpec& cone, int max_len, Visitor& vis)
        : cone_(cone), max_len_(max_len), vis_(vis) {}

    void run() {
        verts_.assign(1, Point{});
        back_ok_.assign(1, true);
        fwd_viol_.assign(1, 0);
        vis_.at_node(Point{}, 0, true, false);
        descend();
    }

   private:
    void descend() {
        int depth = static_cast<int>(verts_.size()) - 1;
        if (depth == max_len_) return;
        const int dims = cone_.dims;
        for (int axis = 0; axis < dims; ++axis) {
            for (int sign : {+1, -1}) {
                Point nxt = verts_.back() + unit_point(axis, sign);
                if (!cone_.contains(nxt)) continue;  // forward-cone prune
                if (!vis_.push(nxt, depth + 1)) continue;
                enter(nxt);
                descend();
                leave();
                vis_.pop();
            }
        }
    }

    void enter(const Point& nxt) {
        int k = static_cast<int>(verts_.size());
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            if (!cone_.contains(nxt - verts_[j])) {
                ++fwd_viol_[j];
                ok = false;
            }
        }
        verts_.push_back(nxt);
        back_ok_.push_back(ok);
        fwd_viol_.push_back(0);

        bool confined = ok;
        bool irreducible = false;
        if (confined && k >= 1) {
            irreducible = true;
            for (int m = 1; m < k; ++m) {
                if (back_ok_[m] && fwd_viol_[m] == 0) {
                    irreducible = false;
                    break;
                }
            }
        }
        vis_.at_node(nxt, k, confined, irreducible);
    }

    void leave() {
        Point last = verts_.back();
        verts_.pop_back();
        back_ok_.pop_back();
        fwd_viol_.pop_back();
        for (size_t j = 0; j < verts_.size(); ++j)
            if (!cone_.contains(last - verts_[j])) --fwd_viol_[j];
    }

    const ConeSpec& cone_;
    int max_len_;
    Visitor& vis_;
    std::vector<Point> verts_;
    std::vector<char> back_ok_;
    std::vector<int> fwd_viol_;
};

// Unrestricted traversal of all (2D)^n paths; only the visitor prunes.
template <class Visitor>
class FullWalker {
   public:
    FullWalker(int dims, int max_len, Visitor& vis) : dims_(dims), max_len_(max_len), vis_(vis) {}

    void run() {
        cur_ = Point{};
        vis_.at_node(cur_, 0);
        descend(0);
    }

   private:
    void descend(int depth) {
        if (depth == max_len_) return;
        for (int axis = 0; axis < dims_; ++axis) {
            for (int sign : {+1, -1}) {
                Point prev = cur_;
                cur_ = cur_ + unit_point(axis, sign);
                if (vis_.push(cur_, depth + 1)) {
                    vis_.at_node(cur_, depth + 1);
                    descend(depth + 1);
                    vis_.pop();
                }
                cur_ = prev;
            }
        }
    }

    int dims_;
    int max_len_;
    Visitor& vis_;
    Point cur_;
};

}  // namespace polylab
