#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qcg/core.hpp"

namespace qcg {

using json = nlohmann::json;

class Ruleset {
public:
    virtual ~Ruleset() = default;

    virtual std::string kind() const = 0;
    virtual bool impartial() const = 0;

    // Feasible labels for player h at p, sorted by canonical order.
    virtual void moves(const Position& p, Player h, std::vector<Label>& out) const = 0;
    virtual std::optional<Position> apply(const Position& p, const Label& m, Player h) const = 0;

    // Realizations of the instance's own start (usually one).
    virtual std::vector<Position> start() const = 0;

    virtual json instance_json() const = 0;
    virtual json position_to_json(const Position& p) const = 0;
    virtual Position position_from_json(const json& j) const = 0;
    virtual json label_to_json(const Label& m) const = 0;
    virtual Label label_from_json(const json& j) const = 0;

    virtual std::string label_text(const Label& m) const { return label_to_json(m).dump(); }
    virtual std::string position_text(const Position& p) const { return position_to_json(p).dump(); }

    const std::string& instance_key() const noexcept { return key_; }

    std::vector<Label> moves(const Position& p, Player h) const {
        std::vector<Label> out;
        moves(p, h, out);
        return out;
    }

protected:
    void set_instance_key(std::string k) { key_ = std::move(k); }

private:
    std::string key_;
};

}  // namespace qcg
