#pragma once

#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "lagmin/biharmonic.hpp"
#include "lagmin/surfaces.hpp"

namespace lagmin {

// Surface specs:
//   r3, r3@theta=0.5, r3~@theta=0.5, ruled(A,B,C,D),
//   conv(1.0*r1, 0.5*r2, 0.3*r3@theta=0.4), field:<field expr>
// Field exprs: sums of [coef*]atom, atoms
//   elliptic(a1=..,d2=..)  hyperbolic(a1..c2, alpha1..gamma4)  parabolic(a1,a2,b1,b2,b3,c1,c2, alpha0..gamma3)
//   exceptional(a,b,c,d,A,B,C,D)  remark()  sphere(a,b,c,d)  poly(x4=1, x2y1=-3, y2=1, c=5)
//   table(r3, theta=0.5)  kelvin(<expr>)  rotate(<expr>, theta=..)
class SpecParser {
public:
    explicit SpecParser(std::string s, int branch = 0) : s_(std::move(s)), branch_(branch) {}

    ParamSurface surface() {
        ParamSurface S = parse_surface();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return S;
    }
    ScalarField field() {
        ScalarField F = parse_sum();
        skip();
        if (pos_ != s_.size()) fail("trailing input");
        return F;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    std::string ident() {
        skip();
        const size_t b = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '~')) ++pos_;
        if (b == pos_) fail("expected a name");
        return s_.substr(b, pos_ - b);
    }
    bool number_ahead() {
        skip();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
    }
    double number() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<size_t>(end - begin);
        return v;
    }

    // name=value list up to ')'
    std::map<std::string, double> kwargs(const std::set<std::string>& allowed) {
        std::map<std::string, double> kv;
        if (eat(')')) return kv;
        do {
            const std::string k = ident();
            if (!allowed.empty() && !allowed.count(k)) fail("unknown key '" + k + "'");
            expect('=');
            if (kv.count(k)) fail("duplicate key '" + k + "'");
            kv[k] = number();
        } while (eat(','));
        expect(')');
        return kv;
    }

    // ---- surfaces ----

    ParamSurface block() {
        const std::string name = ident();
        double theta = 0.0;
        if (eat('@')) {
            if (ident() != "theta") fail("expected theta");
            expect('=');
            theta = number();
        }
        return building_block(name, theta, branch_);
    }

    ParamSurface parse_surface() {
        skip();
        if (s_.compare(pos_, 6, "field:") == 0) {
            pos_ += 6;
            const size_t b = pos_;
            const ScalarField F = parse_sum();
            return reconstruct_surface(F, "field:" + s_.substr(b, pos_ - b));
        }
        const size_t save = pos_;
        const std::string head = ident();
        if (head == "ruled" && eat('(')) {
            double v[4];
            for (int i = 0; i < 4; ++i) {
                if (i) expect(',');
                v[i] = number();
            }
            expect(')');
            return ruled_gauss_surface(v[0], v[1], v[2], v[3]);
        }
        if (head == "conv" && eat('(')) {
            std::vector<std::pair<double, ParamSurface>> terms;
            do {
                double a = 1.0;
                if (number_ahead()) {
                    a = number();
                    expect('*');
                }
                terms.emplace_back(a, block());
            } while (eat(','));
            expect(')');
            return convolve(terms);
        }
        pos_ = save;
        return block();
    }

    // ---- fields ----

    ScalarField parse_sum() {
        std::vector<std::pair<double, ScalarField>> terms;
        double sign = 1.0;
        if (eat('-')) sign = -1.0;
        for (;;) {
            double a = sign;
            bool constant = false;
            if (number_ahead()) {
                a *= number();
                constant = !eat('*');
            }
            if (constant) terms.emplace_back(1.0, make_poly_field({{a, 0, 0}}));
            else terms.emplace_back(a, atom());
            if (eat('+')) sign = 1.0;
            else if (eat('-')) sign = -1.0;
            else break;
        }
        double guard = 0.0;
        for (const auto& t : terms) guard = std::max(guard, t.second.guard());
        if (terms.size() == 1 && terms[0].first == 1.0) return terms[0].second;
        return make_sum_field(terms, branch_).with_guard(guard);
    }

    ScalarField atom() {
        const std::string name = ident();
        expect('(');
        ScalarField F;
        if (name == "elliptic") {
            auto k = kwargs({"a1", "a2", "a3", "a4", "b1", "b2", "b3", "c1", "c2", "c3", "d1", "d2"});
            EllipticCoeffs c;
            c.a1 = k["a1"], c.a2 = k["a2"], c.a3 = k["a3"], c.a4 = k["a4"];
            c.b1 = k["b1"], c.b2 = k["b2"], c.b3 = k["b3"];
            c.c1 = k["c1"], c.c2 = k["c2"], c.c3 = k["c3"], c.d1 = k["d1"], c.d2 = k["d2"];
            F = make_elliptic_field(c);
        } else if (name == "hyperbolic" || name == "parabolic") {
            const bool hyp = name == "hyperbolic";
            const int lo = hyp ? 1 : 0;
            std::set<std::string> allowed = hyp ? std::set<std::string>{"a1", "a2", "a3", "b1", "b2", "c1", "c2"}
                                                : std::set<std::string>{"a1", "a2", "b1", "b2", "b3", "c1", "c2"};
            for (const char* g : {"alpha", "beta", "gamma"})
                for (int i = lo; i < lo + 4; ++i) allowed.insert(g + std::to_string(i));
            auto k = kwargs(allowed);
            HyperbolicCoeffs full;
            bool any_full = false;
            for (int i = 0; i < 4; ++i) {
                const std::string n = std::to_string(i + lo);
                for (auto [g, arr] : {std::pair{"alpha", &full.alpha}, std::pair{"beta", &full.beta}, std::pair{"gamma", &full.gamma}}) {
                    auto it = k.find(g + n);
                    if (it != k.end()) (*arr)[i] = it->second, any_full = true;
                }
            }
            auto g = [&](const char* key) { auto it = k.find(key); return it == k.end() ? 0.0 : it->second; };
            ScalarField reduced = hyp ? make_hyperbolic_reduced(g("a1"), g("a2"), g("a3"), g("b1"), g("b2"), g("c1"), g("c2"))
                                      : make_parabolic_reduced(g("a1"), g("a2"), g("b1"), g("b2"), g("b3"), g("c1"), g("c2"));
            if (any_full) {
                const ScalarField f = hyp ? make_hyperbolic_field(full) : make_parabolic_field({full.alpha, full.beta, full.gamma});
                F = reduced + f;
            } else {
                F = reduced;
            }
        } else if (name == "exceptional") {
            auto k = kwargs({"a", "b", "c", "d", "A", "B", "C", "D"});
            F = make_exceptional_field({k["a"], k["b"], k["c"], k["d"], k["A"], k["B"], k["C"], k["D"]});
        } else if (name == "remark") {
            kwargs({"_"});
            F = make_remark_counterexample();
        } else if (name == "sphere") {
            auto k = kwargs({"a", "b", "c", "d"});
            F = make_sphere_field({k["a"], k["b"], k["c"], k["d"]});
        } else if (name == "poly") {
            static const std::regex mono("(?:x(\\d*))?(?:y(\\d*))?");
            std::vector<Monomial> ms;
            if (!eat(')')) {
                do {
                    const std::string key = ident();
                    std::smatch m;
                    int px = 0, py = 0;
                    if (key != "c") {
                        if (!std::regex_match(key, m, mono)) fail("bad monomial '" + key + "'");
                        if (m[1].matched) px = m[1].length() ? std::stoi(m[1].str()) : 1;
                        if (m[2].matched) py = m[2].length() ? std::stoi(m[2].str()) : 1;
                    }
                    expect('=');
                    ms.push_back({number(), px, py});
                } while (eat(','));
                expect(')');
            }
            F = make_poly_field(ms);
        } else if (name == "table") {
            const std::string t = ident();
            double theta = 0.0;
            if (eat(',')) {
                if (ident() != "theta") fail("expected theta");
                expect('=');
                theta = number();
            }
            expect(')');
            F = table_field(t, theta);
        } else if (name == "kelvin") {
            F = pushforward_inversion(parse_sum());
            expect(')');
        } else if (name == "rotate") {
            const ScalarField G = parse_sum();
            expect(',');
            if (ident() != "theta") fail("expected theta");
            expect('=');
            const double th = number();
            expect(')');
            F = rotate_field(G, th);
        } else {
            fail("unknown field '" + name + "'");
        }
        return F.with_branch(branch_);
    }

    std::string s_;
    size_t pos_ = 0;
    int branch_ = 0;
};

inline ParamSurface parse_surface(const std::string& spec, int branch = 0) { return SpecParser(spec, branch).surface(); }
inline ScalarField parse_field(const std::string& spec, int branch = 0) { return SpecParser(spec, branch).field(); }

} // namespace lagmin
