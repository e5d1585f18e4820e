#include "verm/corrupt/sample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "verm/core/errors.hpp"
#include "verm/corrupt/catalog.hpp"

namespace verm {

namespace {

constexpr std::array<Rgb, 10> kPalette = {{{0x1f, 0x77, 0xb4},
                                           {0xff, 0x7f, 0x0e},
                                           {0x2c, 0xa0, 0x2c},
                                           {0xd6, 0x27, 0x28},
                                           {0x94, 0x67, 0xbd},
                                           {0x8c, 0x56, 0x4b},
                                           {0xe3, 0x77, 0xc2},
                                           {0x7f, 0x7f, 0x7f},
                                           {0xbc, 0xbd, 0x22},
                                           {0x17, 0xbe, 0xcf}}};

constexpr std::array<std::string_view, 12> kWords = {"Revenue", "Growth", "Sales",  "Output", "Traffic", "Energy",
                                                     "Demand",  "Budget", "Yield",  "Users",  "Latency", "Volume"};
constexpr std::array<std::string_view, 6> kQualifiers = {"Quarterly", "Annual", "Weekly", "Regional", "Total", "Mean"};
constexpr std::array<std::string_view, 8> kNames = {"alpha", "beta", "gamma", "delta", "sigma", "omega", "kappa", "theta"};
constexpr std::array<std::string_view, 5> kHeaders = {"Mass", "Share", "Time", "Score", "Rate"};
constexpr std::array<std::string_view, 6> kSvgWords = {"node", "A1", "x=3", "out", "Key", "B7"};

constexpr std::array<double, 6> kScaleFactors = {1.25, 0.8, 2.0, 0.5, 3.0, 0.25};
constexpr std::array<double, 3> kPerturbShares = {0.15, 0.5, 1.2};
constexpr std::array<double, 3> kJitterMagnitudes = {3.0, 8.0, 16.0};

// Look-alike substitutions; never digit to digit and never '.' to ','.
constexpr std::array<std::pair<char, char>, 16> kLookAlikes = {{{'0', 'O'},
                                                                {'1', 'l'},
                                                                {'5', 'S'},
                                                                {'8', 'B'},
                                                                {'2', 'Z'},
                                                                {'a', 'o'},
                                                                {'e', 'c'},
                                                                {'m', 'n'},
                                                                {'g', 'q'},
                                                                {'t', 'f'},
                                                                {'s', 'z'},
                                                                {'l', 'I'},
                                                                {'h', 'b'},
                                                                {'k', 'x'},
                                                                {'%', '#'},
                                                                {'i', 'j'}}};

constexpr std::string_view kGlyphPool = "ABCDEFGHJKLMNPQRSTUVWXYZabdeghkmnpqrtuvwxyz23456789";

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

std::string key(std::string_view a, int b) { return std::string(a) + ":" + std::to_string(b); }
std::string cell_key(int row, int col) { return "cell:" + std::to_string(col) + ":" + std::to_string(row); }

struct Proposal {
  CorruptionOp op;
  std::vector<std::string> claims;
};

/// Proposes ops against a working copy of the document, tracking which
/// elements earlier ops already touched.
class Proposer {
 public:
  Proposer(StructuredDoc& doc, Rng& rng) : doc_(doc), rng_(rng) {}

  std::optional<CorruptionOp> propose(std::string_view category) {
    std::vector<OpKind> kinds;
    for (int k = 0; k <= static_cast<int>(OpKind::GlyphSwap); ++k) {
      const auto kind = static_cast<OpKind>(k);
      if (op_task(kind) == doc_.task && op_category(kind) == category) kinds.push_back(kind);
    }
    shuffle(kinds, rng_);
    for (OpKind kind : kinds) {
      if (auto p = propose_kind(kind)) {
        apply_op(doc_, p->op);
        claims_.insert(p->claims.begin(), p->claims.end());
        return p->op;
      }
    }
    return std::nullopt;
  }

 private:
  bool claimed(const std::string& k) const { return claims_.contains(k); }
  bool claimed_prefix(const std::string& prefix) const {
    auto it = claims_.lower_bound(prefix);
    return it != claims_.end() && it->compare(0, prefix.size(), prefix) == 0;
  }

  template <typename T>
  std::optional<T> pick(const std::vector<T>& options) {
    if (options.empty()) return std::nullopt;
    return options[rng_.below(options.size())];
  }

  Proposal make(OpKind kind, OpTarget target, OpParams params, std::vector<std::string> claims) {
    return {catalog_op(doc_, kind, std::move(target), std::move(params)), std::move(claims)};
  }

  std::optional<Proposal> propose_kind(OpKind kind) {
    switch (doc_.task) {
      case TaskKind::Chart: return propose_chart(kind);
      case TaskKind::Table: return propose_table(kind);
      case TaskKind::Svg: return propose_svg(kind);
    }
    return std::nullopt;
  }

  std::optional<Proposal> propose_chart(OpKind kind) {
    const ChartSpec& c = doc_.chart();
    const int n = static_cast<int>(c.series.size());
    OpTarget t;
    OpParams p;
    switch (kind) {
      case OpKind::SwapSeriesColors: {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (!claimed(key("color", i)) && !claimed(key("color", j)) && c.series[i].color != c.series[j].color)
              pairs.emplace_back(i, j);
        auto pr = pick(pairs);
        if (!pr) return std::nullopt;
        t.series = pr->first;
        t.other = pr->second;
        return make(kind, t, p, {key("color", pr->first), key("color", pr->second)});
      }
      case OpKind::RecolorSeries: {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (!claimed(key("color", i))) idx.push_back(i);
        std::vector<Rgb> fresh;
        for (const auto& col : kPalette)
          if (std::none_of(c.series.begin(), c.series.end(), [&](const Series& s) { return s.color == col; }))
            fresh.push_back(col);
        auto i = pick(idx);
        if (!i || fresh.empty()) return std::nullopt;
        t.series = *i;
        p.color = *pick(fresh);
        return make(kind, t, p, {key("color", *i)});
      }
      case OpKind::ScaleSeries: {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
          const auto& pts = c.series[i].points;
          if (!claimed(key("values", i)) && pts.size() >= 2 &&
              std::all_of(pts.begin(), pts.end(), [](const Point& q) { return q.y != 0.0; }))
            idx.push_back(i);
        }
        auto i = pick(idx);
        if (!i) return std::nullopt;
        t.series = *i;
        p.factor = rng_.pick(kScaleFactors);
        return make(kind, t, p, {key("values", *i)});
      }
      case OpKind::PerturbPoint: {
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i) {
          const auto& pts = c.series[i].points;
          if (claimed(key("values", i)) || pts.size() < 2) continue;
          for (int j = 0; j < static_cast<int>(pts.size()); ++j)
            if (pts[j].y > 0.0) slots.emplace_back(i, j);
        }
        auto s = pick(slots);
        if (!s) return std::nullopt;
        t.series = s->first;
        t.index = s->second;
        const double share = rng_.pick(kPerturbShares);
        const double sign = share < 1.0 && rng_.bernoulli(0.5) ? -1.0 : 1.0;
        p.delta = sign * share * c.series[s->first].points[s->second].y;
        return make(kind, t, p, {key("values", s->first)});
      }
      case OpKind::Retitle: {
        if (claimed("title")) return std::nullopt;
        std::string title;
        do {
          title = std::string(rng_.pick(kQualifiers)) + " " + std::string(rng_.pick(kWords));
        } while (title == c.title);
        p.text = title;
        return make(kind, t, p, {"title"});
      }
      case OpKind::RelabelTick: {
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(c.tick_labels.size()); ++i)
          if (!claimed(key("tick", i))) idx.push_back(i);
        auto i = pick(idx);
        if (!i) return std::nullopt;
        std::string label;
        do {
          label = "T" + std::to_string(rng_.range(0, 99));
        } while (label == c.tick_labels[*i]);
        t.index = *i;
        p.text = label;
        return make(kind, t, p, {key("tick", *i)});
      }
      case OpKind::ChangeChartKind: {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
          if (!claimed(key("kind", i))) idx.push_back(i);
        auto i = pick(idx);
        if (!i) return std::nullopt;
        std::vector<SeriesKind> others;
        for (auto k : {SeriesKind::Bar, SeriesKind::Line, SeriesKind::Scatter})
          if (k != c.series[*i].kind) others.push_back(k);
        t.series = *i;
        p.series_kind = *pick(others);
        return make(kind, t, p, {key("kind", *i)});
      }
      case OpKind::DropLegend:
        if (!c.legend || c.series.empty() || claimed("legend")) return std::nullopt;
        return make(kind, t, p, {"legend"});
      default: return std::nullopt;
    }
  }

  bool cell_free(int row, int col) const { return !claimed(cell_key(row, col)) && !claimed(key("col", col)); }

  std::optional<Proposal> propose_table(OpKind kind) {
    const TableSpec& tb = doc_.table();
    OpTarget t;
    OpParams p;
    auto free_cells = [&](auto&& pred) {
      std::vector<const TableCell*> out;
      for (const auto& c : tb.cells)
        if (cell_free(c.row, c.col) && pred(c)) out.push_back(&c);
      std::sort(out.begin(), out.end(), [](const TableCell* a, const TableCell* b) {
        return std::tie(a->row, a->col) < std::tie(b->row, b->col);
      });
      return out;
    };
    auto target_cell = [&](const TableCell* c) {
      t.row = c->row;
      t.col = c->col;
    };
    switch (kind) {
      case OpKind::CharSwap: {
        std::vector<std::pair<const TableCell*, std::pair<char, char>>> options;
        for (const TableCell* c : free_cells([](const TableCell&) { return true; }))
          for (const auto& pair : kLookAlikes)
            if (c->text.find(pair.first) != std::string::npos) options.emplace_back(c, pair);
        auto o = pick(options);
        if (!o) return std::nullopt;
        target_cell(o->first);
        p.from = std::string(1, o->second.first);
        p.to = std::string(1, o->second.second);
        return make(kind, t, p, {cell_key(t.row, t.col)});
      }
      case OpKind::DropUnit: {
        auto c = pick(free_cells([](const TableCell& x) { return catalog::split_unit(x.text).has_value(); }));
        if (!c) return std::nullopt;
        target_cell(*c);
        return make(kind, t, p, {cell_key(t.row, t.col)});
      }
      case OpKind::DecimalComma: {
        auto c = pick(free_cells([](const TableCell& x) { return x.text.find('.') != std::string::npos; }));
        if (!c) return std::nullopt;
        target_cell(*c);
        return make(kind, t, p, {cell_key(t.row, t.col)});
      }
      case OpKind::DigitFlip: {
        auto c = pick(free_cells(
            [](const TableCell& x) { return std::any_of(x.text.begin(), x.text.end(), catalog::is_digit); }));
        if (!c) return std::nullopt;
        target_cell(*c);
        std::vector<char> digits;
        for (char ch : (*c)->text)
          if (catalog::is_digit(ch) && std::find(digits.begin(), digits.end(), ch) == digits.end())
            digits.push_back(ch);
        const char from = *pick(digits);
        char to = from;
        while (to == from) to = static_cast<char>('0' + rng_.range(0, 9));
        p.from = std::string(1, from);
        p.to = std::string(1, to);
        return make(kind, t, p, {cell_key(t.row, t.col)});
      }
      case OpKind::SwapColumns: {
        if (claimed_prefix("col:")) return std::nullopt;
        auto col_ok = [&](int col) {
          if (claimed(key("col", col)) || claimed_prefix("cell:" + std::to_string(col) + ":")) return false;
          return std::none_of(tb.cells.begin(), tb.cells.end(), [&](const TableCell& c) {
            return c.col <= col && col < c.col + c.colspan && (c.colspan != 1 || c.rowspan != 1);
          });
        };
        std::vector<std::pair<int, int>> pairs;
        for (int a = 0; a < tb.cols; ++a)
          for (int b = a + 1; b < tb.cols; ++b) {
            if (!col_ok(a) || !col_ok(b)) continue;
            bool differs = false;
            for (int r = 0; r < tb.rows && !differs; ++r) {
              const TableCell* x = find_cell(tb, r, a);
              const TableCell* y = find_cell(tb, r, b);
              differs = (x ? x->text : "") != (y ? y->text : "");
            }
            if (differs) pairs.emplace_back(a, b);
          }
        auto pr = pick(pairs);
        if (!pr) return std::nullopt;
        t.col = pr->first;
        t.other = pr->second;
        return make(kind, t, p, {key("col", pr->first), key("col", pr->second)});
      }
      case OpKind::MergeCells: {
        auto c = pick(free_cells([&](const TableCell& x) {
          const TableCell* right = find_cell(tb, x.row, x.col + 1);
          return x.rowspan == 1 && x.colspan == 1 && right && right->rowspan == 1 && right->colspan == 1 &&
                 cell_free(x.row, x.col + 1);
        }));
        if (!c) return std::nullopt;
        target_cell(*c);
        return make(kind, t, p, {cell_key(t.row, t.col), cell_key(t.row, t.col + 1)});
      }
      case OpKind::SplitCell: {
        auto c = pick(free_cells([](const TableCell& x) { return x.rowspan > 1 || x.colspan > 1; }));
        if (!c) return std::nullopt;
        target_cell(*c);
        std::vector<std::string> claims;
        for (int r = t.row; r < t.row + (*c)->rowspan; ++r)
          for (int k = t.col; k < t.col + (*c)->colspan; ++k) claims.push_back(cell_key(r, k));
        return make(kind, t, p, std::move(claims));
      }
      default: return std::nullopt;
    }
  }

  std::optional<Proposal> propose_svg(OpKind kind) {
    const SvgDoc& d = doc_.svg();
    OpTarget t;
    OpParams p;
    auto free_prims = [&](auto&& pred) {
      std::vector<const SvgPrimitive*> out;
      for (const auto& q : d.primitives)
        if (!claimed("prim:" + q.id) && pred(q)) out.push_back(&q);
      return out;
    };
    auto claim = [&] { return std::vector<std::string>{"prim:" + t.id}; };
    switch (kind) {
      case OpKind::JitterVertex: {
        auto q = pick(free_prims([](const SvgPrimitive&) { return true; }));
        if (!q) return std::nullopt;
        t.id = (*q)->id;
        const bool multi = (*q)->kind == PrimitiveKind::Line || (*q)->kind == PrimitiveKind::Polyline;
        t.index = multi ? static_cast<int>(rng_.below((*q)->points.size())) : 0;
        const double mag = rng_.pick(kJitterMagnitudes);
        const double major = rng_.bernoulli(0.5) ? mag : -mag;
        const double minor = rng_.range(-static_cast<int>(mag), static_cast<int>(mag));
        if (rng_.bernoulli(0.5)) {
          p.dx = major;
          p.dy = minor;
        } else {
          p.dx = minor;
          p.dy = major;
        }
        return make(kind, t, p, claim());
      }
      case OpKind::DropPrimitive: {
        auto q = pick(free_prims([](const SvgPrimitive&) { return true; }));
        if (!q) return std::nullopt;
        t.id = (*q)->id;
        return make(kind, t, p, claim());
      }
      case OpKind::StrokeWidth: {
        auto q = pick(free_prims([](const SvgPrimitive& x) {
          return x.kind != PrimitiveKind::Text && x.stroke.has_value() && x.stroke_width >= 1.0;
        }));
        if (!q) return std::nullopt;
        t.id = (*q)->id;
        std::vector<double> widths;
        for (int w = 1; w <= 6; ++w)
          if (w != std::lround((*q)->stroke_width)) widths.push_back(w);
        p.width = *pick(widths);
        return make(kind, t, p, claim());
      }
      case OpKind::FillColor: {
        auto q = pick(free_prims([](const SvgPrimitive& x) {
          return x.kind != PrimitiveKind::Line && x.kind != PrimitiveKind::Polyline && x.fill.has_value();
        }));
        if (!q) return std::nullopt;
        t.id = (*q)->id;
        std::vector<Rgb> colors;
        for (const auto& col : kPalette)
          if (col != *(*q)->fill && col != (*q)->stroke) colors.push_back(col);
        p.color = *pick(colors);
        return make(kind, t, p, claim());
      }
      case OpKind::Regroup: {
        auto q = pick(free_prims([](const SvgPrimitive&) { return true; }));
        if (!q || d.groups.empty()) return std::nullopt;
        t.id = (*q)->id;
        p.group = (*q)->group == 0 ? d.groups.front().id : 0;
        return make(kind, t, p, claim());
      }
      case OpKind::AddBorder:
        if (claimed("border") || find_primitive(d, catalog::kBorderId)) return std::nullopt;
        return make(kind, t, p, {"border", "prim:" + std::string(catalog::kBorderId)});
      case OpKind::GlyphSwap: {
        auto q = pick(free_prims([](const SvgPrimitive& x) { return x.kind == PrimitiveKind::Text && !x.text.empty(); }));
        if (!q) return std::nullopt;
        t.id = (*q)->id;
        t.index = static_cast<int>(rng_.below((*q)->text.size()));
        char to = (*q)->text[t.index];
        while (to == (*q)->text[t.index]) to = kGlyphPool[rng_.below(kGlyphPool.size())];
        p.to = std::string(1, to);
        return make(kind, t, p, claim());
      }
      default: return std::nullopt;
    }
  }

  StructuredDoc& doc_;
  Rng& rng_;
  std::set<std::string> claims_;
};

std::string number_text(Rng& rng) {
  const int tenths = rng.range(10, 999);
  if (rng.bernoulli(0.7)) return format_number(tenths / 10.0);
  return std::to_string(tenths / 10);
}

ChartSpec random_chart(Rng& rng) {
  ChartSpec c;
  c.title = std::string(rng.pick(kQualifiers)) + " " + std::string(rng.pick(kWords));
  const int points = rng.range(3, 6);
  const bool years = rng.bernoulli(0.5);
  for (int i = 0; i < points; ++i)
    c.tick_labels.push_back(years ? std::to_string(2015 + i) : "Q" + std::to_string(i + 1));
  const int nseries = rng.range(1, 3);
  std::vector<Rgb> colors(kPalette.begin(), kPalette.end());
  shuffle(colors, rng);
  std::vector<std::string_view> labels(kNames.begin(), kNames.end());
  shuffle(labels, rng);
  for (int s = 0; s < nseries; ++s) {
    Series series;
    series.kind = static_cast<SeriesKind>(rng.below(3));
    series.label = std::string(labels[s]);
    series.color = colors[s];
    for (int i = 0; i < points; ++i) series.points.push_back({static_cast<double>(i), rng.range(4, 20) / 2.0});
    c.series.push_back(std::move(series));
  }
  c.legend = rng.bernoulli(0.8);
  return c;
}

TableSpec random_table(Rng& rng) {
  static constexpr std::array<std::string_view, 4> kUnits = {" kg", "%", " ms", ""};
  TableSpec t;
  t.rows = rng.range(3, 6);
  t.cols = rng.range(3, 5);
  t.align.assign(t.cols, Align::Left);
  const bool span_header = t.cols >= 4 && rng.bernoulli(0.3);
  t.cells.push_back({0, 0, 1, 1, "Item"});
  for (int c = 1; c < t.cols; ++c) {
    if (span_header && c == 2) continue;
    t.cells.push_back({0, c, 1, span_header && c == 1 ? 2 : 1, std::string(rng.pick(kHeaders))});
  }
  std::vector<std::string_view> names(kNames.begin(), kNames.end());
  shuffle(names, rng);
  std::vector<std::string_view> units;
  for (int c = 1; c < t.cols; ++c) {
    units.push_back(rng.pick(kUnits));
    t.align[c] = rng.bernoulli(0.5) ? Align::Right : Align::Center;
  }
  for (int r = 1; r < t.rows; ++r) {
    t.cells.push_back({r, 0, 1, 1, std::string(names[(r - 1) % names.size()])});
    for (int c = 1; c < t.cols; ++c) t.cells.push_back({r, c, 1, 1, number_text(rng) + std::string(units[c - 1])});
  }
  return t;
}

SvgDoc random_svg(Rng& rng) {
  SvgDoc d;
  d.width = 400;
  d.height = 300;
  d.groups.push_back({1, 10.0, 5.0});
  std::vector<int> cells(12);
  for (int i = 0; i < 12; ++i) cells[i] = i;
  shuffle(cells, rng);
  const int count = rng.range(4, 9);
  for (int i = 0; i < count; ++i) {
    const double ox = (cells[i] % 4) * 100.0, oy = (cells[i] / 4) * 100.0;
    SvgPrimitive q;
    q.id = "p" + std::to_string(i);
    q.kind = i == 0 ? PrimitiveKind::Text : static_cast<PrimitiveKind>(rng.below(5));
    q.group = static_cast<int>(rng.below(2));
    static constexpr std::array<double, 3> kOpacity = {1.0, 0.8, 0.6};
    q.opacity = rng.pick(kOpacity);
    const Rgb fill = rng.pick(kPalette);
    Rgb stroke = rng.pick(kPalette);
    while (stroke == fill) stroke = rng.pick(kPalette);
    switch (q.kind) {
      case PrimitiveKind::Rect:
        q.x = ox + rng.range(20, 30);
        q.y = oy + rng.range(20, 30);
        q.width = rng.range(30, 50);
        q.height = rng.range(30, 50);
        q.fill = fill;
        q.stroke = stroke;
        q.stroke_width = rng.range(1, 4);
        break;
      case PrimitiveKind::Circle:
        q.x = ox + 50 + rng.range(-5, 5);
        q.y = oy + 50 + rng.range(-5, 5);
        q.r = rng.range(12, 25);
        q.fill = fill;
        q.stroke = stroke;
        q.stroke_width = rng.range(1, 4);
        break;
      case PrimitiveKind::Line:
        q.points = {{ox + rng.range(20, 35), oy + rng.range(20, 80)}, {ox + rng.range(65, 80), oy + rng.range(20, 80)}};
        q.stroke = stroke;
        q.stroke_width = rng.range(1, 4);
        break;
      case PrimitiveKind::Polyline: {
        const int n = rng.range(3, 4);
        for (int k = 0; k < n; ++k)
          q.points.push_back({ox + 20 + k * 55.0 / (n - 1), oy + rng.range(20, 80)});
        q.stroke = stroke;
        q.stroke_width = rng.range(1, 4);
        break;
      }
      case PrimitiveKind::Text:
        q.x = ox + rng.range(15, 30);
        q.y = oy + rng.range(30, 50);
        q.text = std::string(rng.pick(kSvgWords));
        q.size = rng.range(1, 2);
        q.fill = fill;
        break;
    }
    d.primitives.push_back(std::move(q));
  }
  return d;
}

}  // namespace

double NoiseConfig::rate_for(std::string_view category) const {
  if (auto it = rates.find(std::string(category)); it != rates.end()) return it->second;
  return all.value_or(0.0);
}

void NoiseConfig::validate() const {
  if (all && !(*all >= 0.0 && *all <= 1.0)) throw ConfigError("noise rate 'all' must be in [0, 1]");
  for (const auto& [cat, r] : rates)
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("noise rate '" + cat + "' must be in [0, 1]");
  if (max_per_category < 1) throw ConfigError("noise max_per_category must be at least 1");
}

Json to_json(const NoiseConfig& noise) {
  Json j = Json::object();
  if (!noise.id.empty()) j["id"] = noise.id;
  if (noise.all) j["all"] = *noise.all;
  if (!noise.rates.empty()) j["rates"] = noise.rates;
  j["policy"] = noise.policy == NoisePolicy::AtMostOne ? "at_most_one" : "independent";
  j["max_per_category"] = noise.max_per_category;
  return j;
}

NoiseConfig noise_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("noise: expected an object");
  NoiseConfig n;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "id") n.id = v.get<std::string>();
      else if (k == "all") n.all = v.get<double>();
      else if (k == "rates") n.rates = v.get<std::map<std::string, double>>();
      else if (k == "max_per_category") n.max_per_category = v.get<int>();
      else if (k == "policy") {
        const auto p = v.get<std::string>();
        if (p == "independent") n.policy = NoisePolicy::Independent;
        else if (p == "at_most_one") n.policy = NoisePolicy::AtMostOne;
        else throw ConfigError("noise: unknown policy '" + p + "'");
      } else {
        throw ConfigError("noise: unknown key '" + k + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  n.validate();
  return n;
}

PairInstance sample_infer(const StructuredDoc& doc, const NoiseConfig& noise, std::uint64_t seed) {
  noise.validate();
  Rng rng(seed);
  StructuredDoc work = doc;
  Proposer proposer(work, rng);
  std::vector<CorruptionOp> ops;
  const int trials = noise.policy == NoisePolicy::AtMostOne ? 1 : noise.max_per_category;
  for (std::string_view category : taxonomy(doc.task)) {
    const double rate = noise.rate_for(category);
    for (int k = 0; k < trials; ++k) {
      if (!rng.bernoulli(rate)) continue;
      if (auto op = proposer.propose(category)) ops.push_back(std::move(*op));
    }
  }
  PairInstance out = apply_edits(doc, ops);
  out.seed = seed;
  out.provenance = Provenance::Infer;
  return out;
}

std::vector<CorruptionOp> plan_ops(const StructuredDoc& doc, int k, Rng& rng) {
  StructuredDoc work = doc;
  Proposer proposer(work, rng);
  std::vector<CorruptionOp> ops;
  const auto tax = taxonomy(doc.task);
  while (static_cast<int>(ops.size()) < k) {
    std::vector<std::string_view> cats(tax.begin(), tax.end());
    shuffle(cats, rng);
    std::optional<CorruptionOp> op;
    for (auto cat : cats)
      if ((op = proposer.propose(cat))) break;
    if (!op) throw DataError("document cannot host " + std::to_string(k) + " independent ops");
    ops.push_back(std::move(*op));
  }
  return ops;
}

StructuredDoc random_doc(TaskKind task, Rng& rng) {
  switch (task) {
    case TaskKind::Chart: return StructuredDoc::make(random_chart(rng));
    case TaskKind::Table: return StructuredDoc::make(random_table(rng));
    case TaskKind::Svg: return StructuredDoc::make(random_svg(rng));
  }
  throw DataError("unknown task");
}

}  // namespace verm
