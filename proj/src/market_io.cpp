#include "triside/market_io.hpp"

#include <map>
#include <vector>

#include "json_util.hpp"

namespace triside {

namespace {

using nlohmann::json;

std::map<std::string, int> make_index(const std::vector<std::string>& ids,
                                      const std::string& path) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty()) throw InputError(path + ": empty id");
    if (!index.emplace(ids[i], static_cast<int>(i)).second)
      throw InputError(path + ": duplicate id " + ids[i]);
  }
  if (index.empty()) throw InputError(path + ": needs at least one id");
  return index;
}

void check_entry_keys(const json& entry, const std::string& path,
                      std::initializer_list<const char*> allowed) {
  if (!entry.is_object()) throw InputError(path + ": expected an object");
  for (const auto& [key, value] : entry.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || key == name;
    if (!known) throw InputError(path + ": unknown key " + key);
  }
  for (const char* name : allowed)
    if (!entry.contains(name))
      throw InputError(path + ": missing key " + std::string(name));
}

int resolve(const std::map<std::string, int>& index, const json& value,
            const std::string& path, const char* role) {
  std::string field = path + "." + role;
  if (!value.is_string()) throw InputError(field + ": expected a string id");
  auto found = index.find(value.get<std::string>());
  if (found == index.end())
    throw InputError(field + ": unknown " + role + " " + value.get<std::string>());
  return found->second;
}

}  // namespace

Market load_market(const std::string& text) {
  json doc = jsonio::parse_document(text, "market document");
  if (!doc.is_object()) throw InputError("market document must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "buyers" && key != "stores" && key != "couriers" &&
        key != "valuations" && key != "costs" && key != "store_costs")
      throw InputError("unknown market key " + key);
  for (const char* key : {"buyers", "stores", "couriers", "valuations", "costs"})
    if (!doc.contains(key))
      throw InputError("market document is missing key " + std::string(key));

  auto buyers = jsonio::string_list(doc["buyers"], "buyers");
  auto stores = jsonio::string_list(doc["stores"], "stores");
  auto couriers = jsonio::string_list(doc["couriers"], "couriers");
  auto buyer_at = make_index(buyers, "buyers");
  auto store_at = make_index(stores, "stores");
  auto courier_at = make_index(couriers, "couriers");
  const int m = static_cast<int>(buyers.size());
  const int n = static_cast<int>(stores.size());
  const int l = static_cast<int>(couriers.size());

  if (!doc["valuations"].is_array()) throw InputError("valuations: expected an array");
  RatGrid valuation(m, n);
  std::vector<bool> valuation_seen(static_cast<size_t>(m * n), false);
  for (size_t i = 0; i < doc["valuations"].size(); ++i) {
    const json& entry = doc["valuations"][i];
    std::string path = "valuations[" + std::to_string(i) + "]";
    check_entry_keys(entry, path, {"buyer", "store", "value"});
    int b = resolve(buyer_at, entry["buyer"], path, "buyer");
    int s = resolve(store_at, entry["store"], path, "store");
    if (valuation_seen[static_cast<size_t>(b * n + s)])
      throw InputError("valuations: duplicate entry for (" + buyers[static_cast<size_t>(b)] +
                       ", " + stores[static_cast<size_t>(s)] + ")");
    valuation_seen[static_cast<size_t>(b * n + s)] = true;
    valuation(b, s) = jsonio::rat_from_json(entry["value"], path + ".value");
  }
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s)
      if (!valuation_seen[static_cast<size_t>(b * n + s)])
        throw InputError("valuations: missing entry for (" + buyers[static_cast<size_t>(b)] +
                         ", " + stores[static_cast<size_t>(s)] + ")");

  if (!doc["costs"].is_array()) throw InputError("costs: expected an array");
  std::vector<RatGrid> cost(static_cast<size_t>(l), RatGrid(m, n));
  std::vector<bool> cost_seen(static_cast<size_t>(l * m * n), false);
  for (size_t i = 0; i < doc["costs"].size(); ++i) {
    const json& entry = doc["costs"][i];
    std::string path = "costs[" + std::to_string(i) + "]";
    check_entry_keys(entry, path, {"courier", "buyer", "store", "value"});
    int d = resolve(courier_at, entry["courier"], path, "courier");
    int b = resolve(buyer_at, entry["buyer"], path, "buyer");
    int s = resolve(store_at, entry["store"], path, "store");
    size_t slot = static_cast<size_t>((d * m + b) * n + s);
    if (cost_seen[slot])
      throw InputError("costs: duplicate entry for (" + couriers[static_cast<size_t>(d)] +
                       ", " + buyers[static_cast<size_t>(b)] + ", " +
                       stores[static_cast<size_t>(s)] + ")");
    cost_seen[slot] = true;
    cost[static_cast<size_t>(d)](b, s) = jsonio::rat_from_json(entry["value"], path + ".value");
  }
  for (int d = 0; d < l; ++d)
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < n; ++s)
        if (!cost_seen[static_cast<size_t>((d * m + b) * n + s)])
          throw InputError("costs: missing entry for (" + couriers[static_cast<size_t>(d)] +
                           ", " + buyers[static_cast<size_t>(b)] + ", " +
                           stores[static_cast<size_t>(s)] + ")");

  std::vector<Rat> store_cost(static_cast<size_t>(n), Rat(0));
  if (doc.contains("store_costs")) {
    if (!doc["store_costs"].is_array()) throw InputError("store_costs: expected an array");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (size_t i = 0; i < doc["store_costs"].size(); ++i) {
      const json& entry = doc["store_costs"][i];
      std::string path = "store_costs[" + std::to_string(i) + "]";
      check_entry_keys(entry, path, {"store", "value"});
      int s = resolve(store_at, entry["store"], path, "store");
      if (seen[static_cast<size_t>(s)])
        throw InputError("store_costs: duplicate entry for " + stores[static_cast<size_t>(s)]);
      seen[static_cast<size_t>(s)] = true;
      store_cost[static_cast<size_t>(s)] = jsonio::rat_from_json(entry["value"], path + ".value");
    }
  }

  return Market(std::move(buyers), std::move(stores), std::move(couriers),
                std::move(valuation), std::move(cost), std::move(store_cost));
}

std::string save_market(const Market& market) {
  json doc;
  doc["buyers"] = market.buyer_ids();
  doc["stores"] = market.store_ids();
  doc["couriers"] = market.courier_ids();
  doc["valuations"] = json::array();
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s)
      doc["valuations"].push_back({{"buyer", market.buyer_ids()[static_cast<size_t>(b)]},
                                   {"store", market.store_ids()[static_cast<size_t>(s)]},
                                   {"value", jsonio::rat_to_json(market.valuation(b, s))}});
  doc["costs"] = json::array();
  for (int d = 0; d < market.num_couriers(); ++d)
    for (int b = 0; b < market.num_buyers(); ++b)
      for (int s = 0; s < market.num_stores(); ++s)
        doc["costs"].push_back({{"courier", market.courier_ids()[static_cast<size_t>(d)]},
                                {"buyer", market.buyer_ids()[static_cast<size_t>(b)]},
                                {"store", market.store_ids()[static_cast<size_t>(s)]},
                                {"value", jsonio::rat_to_json(market.cost(d, b, s))}});
  if (market.has_store_costs()) {
    doc["store_costs"] = json::array();
    for (int s = 0; s < market.num_stores(); ++s)
      doc["store_costs"].push_back(
          {{"store", market.store_ids()[static_cast<size_t>(s)]},
           {"value", jsonio::rat_to_json(market.store_cost(s))}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace triside
