#include "triside/certificate_io.hpp"

#include <vector>

#include "json_util.hpp"

namespace triside {

namespace {

using nlohmann::json;

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

int resolve_id(const Market& market, const json& value, const std::string& path,
               const char* role) {
  std::string field = path + "." + role;
  if (!value.is_string()) throw InputError(field + ": expected a string id");
  const std::string id = value.get<std::string>();
  try {
    if (std::string_view(role) == "buyer") return market.buyer_index(id);
    if (std::string_view(role) == "store") return market.store_index(id);
    return market.courier_index(id);
  } catch (const InputError&) {
    throw InputError(field + ": unknown " + role + " " + id);
  }
}

// Reads a dense buyer x store list of {buyer, store, value} entries.
RatGrid load_order_grid(const Market& market, const json& value, const std::string& name) {
  if (!value.is_array()) throw InputError(name + ": expected an array");
  const int m = market.num_buyers(), n = market.num_stores();
  RatGrid grid(m, n);
  std::vector<bool> seen(static_cast<size_t>(m * n), false);
  for (size_t i = 0; i < value.size(); ++i) {
    const json& entry = value[i];
    std::string path = name + "[" + std::to_string(i) + "]";
    check_entry_keys(entry, path, {"buyer", "store", "value"});
    int b = resolve_id(market, entry["buyer"], path, "buyer");
    int s = resolve_id(market, entry["store"], path, "store");
    if (seen[static_cast<size_t>(b * n + s)])
      throw InputError(name + ": duplicate entry for (" + market.buyer_ids()[static_cast<size_t>(b)] +
                       ", " + market.store_ids()[static_cast<size_t>(s)] + ")");
    seen[static_cast<size_t>(b * n + s)] = true;
    grid(b, s) = jsonio::rat_from_json(entry["value"], path + ".value");
  }
  for (int b = 0; b < m; ++b)
    for (int s = 0; s < n; ++s)
      if (!seen[static_cast<size_t>(b * n + s)])
        throw InputError(name + ": missing entry for (" + market.buyer_ids()[static_cast<size_t>(b)] +
                         ", " + market.store_ids()[static_cast<size_t>(s)] + ")");
  return grid;
}

json save_order_grid(const Market& market, const RatGrid& grid) {
  json list = json::array();
  for (int b = 0; b < market.num_buyers(); ++b)
    for (int s = 0; s < market.num_stores(); ++s)
      list.push_back({{"buyer", market.buyer_ids()[static_cast<size_t>(b)]},
                      {"store", market.store_ids()[static_cast<size_t>(s)]},
                      {"value", jsonio::rat_to_json(grid(b, s))}});
  return list;
}

}  // namespace

EquilibriumCertificate load_certificate(const std::string& text, const Market& market) {
  json doc = jsonio::parse_document(text, "certificate document");
  if (!doc.is_object()) throw InputError("certificate document must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "mode" && key != "market_clearing" && key != "purchase_prices" &&
        key != "delivery_compensations" && key != "tips" && key != "allocation")
      throw InputError("unknown certificate key " + key);
  for (const char* key : {"mode", "market_clearing", "purchase_prices",
                          "delivery_compensations", "allocation"})
    if (!doc.contains(key))
      throw InputError("certificate document is missing key " + std::string(key));

  EquilibriumCertificate certificate;
  if (!doc["mode"].is_string()) throw InputError("mode: expected a string");
  auto mode = mode_from_tag(doc["mode"].get<std::string>());
  if (!mode) throw InputError("mode: expected \"with-tip\" or \"without-tip\"");
  certificate.mode = *mode;
  if (!doc["market_clearing"].is_boolean())
    throw InputError("market_clearing: expected a boolean");
  certificate.market_clearing = doc["market_clearing"].get<bool>();

  certificate.prices = PriceSystem::zeros(market);
  const json& prices = doc["purchase_prices"];
  if (!prices.is_array()) throw InputError("purchase_prices: expected an array");
  std::vector<bool> priced(static_cast<size_t>(market.num_stores()), false);
  for (size_t i = 0; i < prices.size(); ++i) {
    const json& entry = prices[i];
    std::string path = "purchase_prices[" + std::to_string(i) + "]";
    check_entry_keys(entry, path, {"store", "value"});
    int s = resolve_id(market, entry["store"], path, "store");
    if (priced[static_cast<size_t>(s)])
      throw InputError("purchase_prices: duplicate entry for " +
                       market.store_ids()[static_cast<size_t>(s)]);
    priced[static_cast<size_t>(s)] = true;
    certificate.prices.purchase[static_cast<size_t>(s)] =
        jsonio::rat_from_json(entry["value"], path + ".value");
  }
  for (int s = 0; s < market.num_stores(); ++s)
    if (!priced[static_cast<size_t>(s)])
      throw InputError("purchase_prices: missing entry for " +
                       market.store_ids()[static_cast<size_t>(s)]);

  certificate.prices.compensation =
      load_order_grid(market, doc["delivery_compensations"], "delivery_compensations");
  if (doc.contains("tips"))
    certificate.prices.tip = load_order_grid(market, doc["tips"], "tips");

  const json& allocation = doc["allocation"];
  if (!allocation.is_array()) throw InputError("allocation: expected an array");
  for (size_t i = 0; i < allocation.size(); ++i) {
    const json& entry = allocation[i];
    std::string path = "allocation[" + std::to_string(i) + "]";
    check_entry_keys(entry, path, {"buyer", "store", "courier"});
    Trade trade;
    trade.buyer = resolve_id(market, entry["buyer"], path, "buyer");
    trade.store = resolve_id(market, entry["store"], path, "store");
    trade.courier = resolve_id(market, entry["courier"], path, "courier");
    certificate.allocation.trades.push_back(trade);
  }
  certificate.allocation.canonicalize();
  return certificate;
}

std::string save_certificate(const EquilibriumCertificate& certificate,
                             const Market& market) {
  json doc;
  doc["mode"] = mode_tag(certificate.mode);
  doc["market_clearing"] = certificate.market_clearing;
  doc["purchase_prices"] = json::array();
  for (int s = 0; s < market.num_stores(); ++s)
    doc["purchase_prices"].push_back(
        {{"store", market.store_ids()[static_cast<size_t>(s)]},
         {"value", jsonio::rat_to_json(certificate.prices.purchase[static_cast<size_t>(s)])}});
  doc["delivery_compensations"] = save_order_grid(market, certificate.prices.compensation);
  if (!certificate.prices.tip.all_zero())
    doc["tips"] = save_order_grid(market, certificate.prices.tip);
  Allocation sorted = certificate.allocation;
  sorted.canonicalize();
  doc["allocation"] = json::array();
  for (const Trade& trade : sorted.trades)
    doc["allocation"].push_back(
        {{"buyer", market.buyer_ids()[static_cast<size_t>(trade.buyer)]},
         {"store", market.store_ids()[static_cast<size_t>(trade.store)]},
         {"courier", market.courier_ids()[static_cast<size_t>(trade.courier)]}});
  return doc.dump(2) + "\n";
}

}  // namespace triside
