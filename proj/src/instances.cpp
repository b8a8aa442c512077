#include "triside/instances.hpp"

#include <random>
#include <utility>

#include <json.hpp>

#include "triside/errors.hpp"
#include "triside/welfare.hpp"

namespace triside {

namespace {

constexpr std::pair<Family, const char*> kFamilyTags[] = {
    {Family::Fig1, "fig1"},
    {Family::Fig2, "fig2"},
    {Family::Fig3, "fig3"},
    {Family::RandomUnstructured, "random-unstructured"},
    {Family::RandomCourierStore, "random-courier-store"},
    {Family::RandomCourierBuyer, "random-courier-buyer"},
    {Family::RandomSingleMinded, "random-single-minded"},
    {Family::From3dm, "from-3dm"},
};

std::vector<std::string> numbered_ids(char prefix, int count) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<size_t>(count));
  for (int i = 1; i <= count; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

Market fig1_market() {
  RatGrid valuation(2, 1);
  valuation(0, 0) = 3;
  valuation(1, 0) = 10;
  std::vector<RatGrid> cost(2, RatGrid(2, 1));
  cost[0](0, 0) = 0;
  cost[0](1, 0) = 11;
  cost[1](0, 0) = 1;
  cost[1](1, 0) = 12;
  return Market(numbered_ids('b', 2), numbered_ids('s', 1), numbered_ids('d', 2),
                std::move(valuation), std::move(cost));
}

Market fig2_market() {
  RatGrid valuation(2, 2);
  valuation(0, 0) = 4;
  valuation(0, 1) = 2;
  valuation(1, 0) = 1;
  valuation(1, 1) = 3;
  std::vector<RatGrid> cost(1, RatGrid(2, 2));  // the lone courier is free
  return Market(numbered_ids('b', 2), numbered_ids('s', 2), numbered_ids('d', 1),
                std::move(valuation), std::move(cost));
}

Market fig3_market(const std::optional<Rat>& kappa) {
  if (!kappa) throw InputError("this family needs a kappa value");
  if (*kappa <= 2) throw InputError("kappa must exceed 2");
  RatGrid valuation(2, 2);
  for (int b = 0; b < 2; ++b)
    for (int s = 0; s < 2; ++s) valuation(b, s) = 1;
  std::vector<RatGrid> cost(2, RatGrid(2, 2));
  cost[0](0, 0) = 0;
  cost[0](0, 1) = *kappa;
  cost[0](1, 0) = *kappa;
  cost[0](1, 1) = Rat(1, 2);
  cost[1](0, 0) = *kappa;
  cost[1](0, 1) = Rat(49, 100);
  cost[1](1, 0) = Rat(1, 2);
  cost[1](1, 1) = *kappa;
  return Market(numbered_ids('b', 2), numbered_ids('s', 2), numbered_ids('d', 2),
                std::move(valuation), std::move(cost));
}

class GridDraw {
 public:
  GridDraw(std::mt19937_64& rng, const ValueGrid& grid) : rng_(rng), grid_(grid) {
    if (grid.max_numerator < 0) throw InputError("grid needs a nonnegative numerator range");
    if (grid.denominator < 1) throw InputError("grid needs a positive denominator");
  }

  // mpq_class does not reduce fractions on construction; canonicalize so
  // that comparisons behave.
  Rat value() { return reduced(pick_(rng_, Bounds{0, grid_.max_numerator})); }

  Rat positive_value() {
    long hi = std::max(1L, grid_.max_numerator);
    return reduced(pick_(rng_, Bounds{1, hi}));
  }

  int index(int count) { return static_cast<int>(pick_(rng_, Bounds{0, count - 1})); }

  bool coin() { return pick_(rng_, Bounds{0, 1}) == 1; }

 private:
  using Bounds = std::uniform_int_distribution<long>::param_type;

  Rat reduced(long numerator) const {
    Rat value(numerator, grid_.denominator);
    value.canonicalize();
    return value;
  }

  std::mt19937_64& rng_;
  ValueGrid grid_;
  std::uniform_int_distribution<long> pick_;
};

void check_dims(const InstanceSpec& spec) {
  if (spec.buyers < 1 || spec.stores < 1 || spec.couriers < 1)
    throw InputError("dims must all be positive");
}

RatGrid draw_grid(GridDraw& draw, int rows, int cols) {
  RatGrid grid(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) grid(r, c) = draw.value();
  return grid;
}

std::vector<RatGrid> draw_cost_tensor(GridDraw& draw, int couriers, int buyers, int stores) {
  std::vector<RatGrid> cost;
  cost.reserve(static_cast<size_t>(couriers));
  for (int d = 0; d < couriers; ++d) cost.push_back(draw_grid(draw, buyers, stores));
  return cost;
}

Market random_unstructured(const InstanceSpec& spec, GridDraw& draw) {
  RatGrid valuation = draw_grid(draw, spec.buyers, spec.stores);
  auto cost = draw_cost_tensor(draw, spec.couriers, spec.buyers, spec.stores);
  return Market(numbered_ids('b', spec.buyers), numbered_ids('s', spec.stores),
                numbered_ids('d', spec.couriers), std::move(valuation), std::move(cost));
}

// Builds a market with c_d(b,s) = shared(b,s) + part_d(key), key being the
// store or the buyer. Re-draws when extra coincidental structure would make
// the detector call it something else, so the reported kind matches the
// family; a handful of retries is always enough away from degenerate dims.
Market random_decomposable(const InstanceSpec& spec, GridDraw& draw, CostKind intended) {
  const int m = spec.buyers, n = spec.stores, l = spec.couriers;
  const int keys = intended == CostKind::CourierStore ? n : m;
  RatGrid valuation = draw_grid(draw, m, n);
  Market market = Market(numbered_ids('b', m), numbered_ids('s', n), numbered_ids('d', l),
                         valuation, draw_cost_tensor(draw, l, m, n));
  for (int attempt = 0; attempt < 200; ++attempt) {
    RatGrid shared = draw_grid(draw, m, n);
    std::vector<std::vector<Rat>> part(static_cast<size_t>(l));
    for (int d = 0; d < l; ++d)
      for (int k = 0; k < keys; ++k) part[static_cast<size_t>(d)].push_back(draw.value());
    std::vector<RatGrid> cost(static_cast<size_t>(l), RatGrid(m, n));
    for (int d = 0; d < l; ++d)
      for (int b = 0; b < m; ++b)
        for (int s = 0; s < n; ++s)
          cost[static_cast<size_t>(d)](b, s) =
              shared(b, s) +
              part[static_cast<size_t>(d)][static_cast<size_t>(
                  intended == CostKind::CourierStore ? s : b)];
    market = Market(numbered_ids('b', m), numbered_ids('s', n), numbered_ids('d', l),
                    valuation, std::move(cost));
    if (detect_cost_structure(market).kind == intended) break;
  }
  return market;
}

Market random_single_minded(const InstanceSpec& spec, GridDraw& draw) {
  const int m = spec.buyers, n = spec.stores, l = spec.couriers;
  RatGrid valuation(m, n);
  for (int b = 0; b < m; ++b) {
    int liked = draw.index(n);
    valuation(b, liked) = draw.positive_value();
  }
  Market market = Market(numbered_ids('b', m), numbered_ids('s', n), numbered_ids('d', l),
                         valuation, draw_cost_tensor(draw, l, m, n));
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (detect_cost_structure(market).kind == CostKind::SingleMindedBuyers) break;
    market = Market(numbered_ids('b', m), numbered_ids('s', n), numbered_ids('d', l),
                    valuation, draw_cost_tensor(draw, l, m, n));
  }
  return market;
}

Market from_3dm(const InstanceSpec& spec, GridDraw& draw) {
  if (spec.buyers != spec.stores || spec.stores != spec.couriers)
    throw InputError("the triple-system family needs equal dims on every side");
  const int side = spec.buyers;
  std::vector<std::array<int, 3>> triples = spec.triples;
  if (triples.empty())
    for (int b = 0; b < side; ++b)
      for (int s = 0; s < side; ++s)
        for (int d = 0; d < side; ++d)
          if (draw.coin()) triples.push_back({b, s, d});
  return hardness_instance_from_3dm(side, triples);
}

}  // namespace

const char* family_tag(Family family) {
  for (const auto& [value, tag] : kFamilyTags)
    if (value == family) return tag;
  return "?";
}

std::optional<Family> family_from_tag(std::string_view tag) {
  for (const auto& [value, name] : kFamilyTags)
    if (tag == name) return value;
  return std::nullopt;
}

std::vector<std::string> all_family_tags() {
  std::vector<std::string> tags;
  for (const auto& [value, tag] : kFamilyTags) tags.emplace_back(tag);
  return tags;
}

Market generate(const InstanceSpec& spec) {
  switch (spec.family) {
    case Family::Fig1: return fig1_market();
    case Family::Fig2: return fig2_market();
    case Family::Fig3: return fig3_market(spec.kappa);
    default: break;
  }
  check_dims(spec);
  std::mt19937_64 rng(spec.seed);
  GridDraw draw(rng, spec.grid);
  switch (spec.family) {
    case Family::RandomUnstructured: return random_unstructured(spec, draw);
    case Family::RandomCourierStore:
      return random_decomposable(spec, draw, CostKind::CourierStore);
    case Family::RandomCourierBuyer:
      return random_decomposable(spec, draw, CostKind::CourierBuyer);
    case Family::RandomSingleMinded: return random_single_minded(spec, draw);
    case Family::From3dm: return from_3dm(spec, draw);
    default: break;
  }
  throw InputError("unknown instance family");
}

InstanceSpec instance_spec_from_json(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw InputError(std::string("spec is not valid JSON: ") + error.what());
  }
  if (!parsed.is_object()) throw InputError("spec must be a JSON object");

  InstanceSpec spec;
  bool saw_family = false;
  for (const auto& [key, value] : parsed.items()) {
    if (key == "family") {
      if (!value.is_string()) throw InputError("family must be a string");
      auto family = family_from_tag(value.get<std::string>());
      if (!family) throw InputError("unknown family " + value.get<std::string>());
      spec.family = *family;
      saw_family = true;
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer())
        throw InputError("seed must be an integer");
      spec.seed = value.get<std::uint64_t>();
    } else if (key == "dims") {
      if (!value.is_array() || value.size() != 3)
        throw InputError("dims must be [buyers, stores, couriers]");
      for (const auto& entry : value)
        if (!entry.is_number_integer()) throw InputError("dims entries must be integers");
      spec.buyers = value[0].get<int>();
      spec.stores = value[1].get<int>();
      spec.couriers = value[2].get<int>();
    } else if (key == "grid") {
      if (!value.is_object()) throw InputError("grid must be an object");
      for (const auto& [gkey, gvalue] : value.items()) {
        if (!gvalue.is_number_integer())
          throw InputError("grid entries must be integers");
        if (gkey == "max_numerator")
          spec.grid.max_numerator = gvalue.get<long>();
        else if (gkey == "denominator")
          spec.grid.denominator = gvalue.get<long>();
        else
          throw InputError("unknown grid key " + gkey);
      }
    } else if (key == "kappa") {
      std::optional<Rat> kappa;
      if (value.is_number_integer())
        kappa = Rat(value.get<long>());
      else if (value.is_string())
        kappa = rat_from_string(value.get<std::string>());
      if (!kappa) throw InputError("kappa must be an integer or a rational string");
      spec.kappa = *kappa;
    } else if (key == "triples") {
      if (!value.is_array()) throw InputError("triples must be an array");
      for (const auto& entry : value) {
        if (!entry.is_array() || entry.size() != 3)
          throw InputError("each triple must be [buyer, store, courier]");
        for (const auto& part : entry)
          if (!part.is_number_integer())
            throw InputError("triple entries must be integers");
        spec.triples.push_back(
            {entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()});
      }
    } else {
      throw InputError("unknown spec key " + key);
    }
  }
  if (!saw_family) throw InputError("spec needs a family");
  return spec;
}

}  // namespace triside
