#include <algorithm>
#include <limits>
#include <map>

#include "mathfind/phoc/phoc.hpp"

namespace mathfind {

namespace {

constexpr double kScriptScale = 0.7;
constexpr double kScriptShift = 0.4;
constexpr double kMargin = 0.1;
constexpr double kBarHalf = 0.05;
constexpr double kGap = 0.05;

struct Placed {
    NodeId node;
    double x0, y0, x1, y1;  // y up
};

struct Laid {
    std::vector<Placed> boxes;
    double width = 0.0;
    double top = 0.0;
    double bottom = 0.0;

    void add(Placed p)
    {
        top = boxes.empty() ? p.y1 : std::max(top, p.y1);
        bottom = boxes.empty() ? p.y0 : std::min(bottom, p.y0);
        boxes.push_back(p);
    }
    void place(Laid const& part, double dx, double dy)
    {
        for (auto p : part.boxes) {
            add({p.node, p.x0 + dx, p.y0 + dy, p.x1 + dx, p.y1 + dy});
        }
    }
};

class Layout {
  public:
    explicit Layout(SltTree const& slt) : m_slt(slt) {}

    Laid line(NodeId head, double s) const
    {
        Laid out;
        double x = 0.0;
        for (NodeId cur = head; cur != kNoNode; cur = m_slt.child(cur, Relation::Next)) {
            x += scripts(out, cur, Relation::PreSup, Relation::PreSub, x, s);
            x += symbol(out, cur, x, s);
            x += scripts(out, cur, Relation::Sup, Relation::Sub, x, s);
        }
        out.width = x;
        return out;
    }

  private:
    double scripts(Laid& out, NodeId id, Relation up, Relation down, double x, double s) const
    {
        double w = 0.0;
        if (auto c = m_slt.child(id, up); c != kNoNode) {
            auto l = line(c, s * kScriptScale);
            out.place(l, x, kScriptShift * s);
            w = std::max(w, l.width);
        }
        if (auto c = m_slt.child(id, down); c != kNoNode) {
            auto l = line(c, s * kScriptScale);
            out.place(l, x, -kScriptShift * s);
            w = std::max(w, l.width);
        }
        return w;
    }

    double symbol(Laid& out, NodeId id, double x, double s) const
    {
        auto above = m_slt.child(id, Relation::Above);
        auto below = m_slt.child(id, Relation::Below);
        auto inside = m_slt.child(id, Relation::Inside);
        if (m_slt.symbol(id).label == "\\frac") {
            auto num = line(above, s);
            auto den = line(below, s);
            double w = std::max({num.width, den.width, s});
            out.add({id, x, -kBarHalf * s, x + w, kBarHalf * s});
            out.place(num, x + (w - num.width) / 2, (kBarHalf + kGap) * s - num.bottom);
            out.place(den, x + (w - den.width) / 2, -(kBarHalf + kGap) * s - den.top);
            return w;
        }
        if (inside != kNoNode) {
            auto in = line(inside, s);
            double m = kMargin * s;
            double w = in.width + 2 * m;
            out.add({id, x, in.bottom - m, x + w, in.top + m});
            out.place(in, x + m, 0.0);
            return w;
        }
        auto hi = line(above, s * kScriptScale);
        auto lo = line(below, s * kScriptScale);
        double w = std::max({s, hi.width, lo.width});
        out.add({id, x + (w - s) / 2, -s / 2, x + (w + s) / 2, s / 2});
        if (above != kNoNode) {
            out.place(hi, x + (w - hi.width) / 2, s / 2 - hi.bottom);
        }
        if (below != kNoNode) {
            out.place(lo, x + (w - lo.width) / 2, -s / 2 - lo.top);
        }
        return w;
    }

    SltTree const& m_slt;
};

}  // namespace

std::vector<SymbolBox> layout_symbols(SltTree const& slt)
{
    std::vector<SymbolBox> out;
    if (slt.root() == kNoNode) {
        return out;
    }
    auto laid = Layout(slt).line(slt.root(), 1.0);
    double minx = std::numeric_limits<double>::max();
    double maxx = std::numeric_limits<double>::lowest();
    for (auto const& p : laid.boxes) {
        minx = std::min(minx, p.x0);
        maxx = std::max(maxx, p.x1);
    }
    double w = maxx - minx;
    double h = laid.top - laid.bottom;
    std::map<NodeId, Placed> by_node;
    for (auto const& p : laid.boxes) {
        by_node.emplace(p.node, p);
    }
    for (auto id : slt.reading_order()) {
        auto const& p = by_node.at(id);
        out.push_back({slt.symbol(id).label, (p.x0 - minx) / w, (laid.top - p.y1) / h,
                       (p.x1 - minx) / w, (laid.top - p.y0) / h});
    }
    return out;
}

}  // namespace mathfind
