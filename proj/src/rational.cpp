#include "ergolab/rational.hpp"

#include <cctype>
#include <sstream>

namespace ergolab {

Rat rat_from_string(const std::string& s) {
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!is_int(num) || !is_int(den))
        throw Error("malformed rational '" + s + "' (expected p or p/q)");
    mpz_class n(num), d(den);
    if (d == 0) throw Error("zero denominator in rational '" + s + "'");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::optional<Rat> rat_sqrt_exact(const Rat& r) {
    if (r < 0) return std::nullopt;
    const mpz_class& num = r.get_num();
    const mpz_class& den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rat out(sn, sd);
    out.canonicalize();
    return out;
}

std::pair<Rat, Rat> rat_sqrt_bracket(const Rat& r, unsigned digits) {
    if (r < 0) throw Error("sqrt bracket of a negative rational");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    // floor(sqrt(num*den)) * scale / (den*scale) brackets sqrt(num/den).
    mpz_class m = r.get_num() * r.get_den() * scale * scale;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
    Rat lo(root, r.get_den() * scale);
    lo.canonicalize();
    Rat hi(root + 1, r.get_den() * scale);
    hi.canonicalize();
    return {lo, hi};
}

std::string gauss_to_string(const GaussRat& z) {
    std::ostringstream os;
    os << rat_to_string(z.re);
    if (z.im != 0) os << (z.im > 0 ? "+" : "") << rat_to_string(z.im) << "i";
    return os.str();
}

std::optional<Rat> gauss_abs_exact(const GaussRat& z) {
    if (z.im == 0) return rat_abs(z.re);
    if (z.re == 0) return rat_abs(z.im);
    return rat_sqrt_exact(z.norm_sq());
}

}  // namespace ergolab
