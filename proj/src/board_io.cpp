#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "boardsplit/board.hpp"

namespace boardsplit {

void write_board(std::ostream& out, const RootBoard& board)
{
    out << board.branching() << ' ' << board.depth() << '\n';
    std::string line(static_cast<std::size_t>(board.side()), '0');
    for (int r = 0; r < board.side(); ++r) {
        for (int c = 0; c < board.side(); ++c) line[c] = board.cell(r, c) ? '1' : '0';
        out << line << '\n';
    }
}

RootBoard read_board(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) throw BoardFormatError("missing \"B D\" header line");
    std::istringstream hs(header);
    int b = 0;
    int d = 0;
    std::string rest;
    if (!(hs >> b >> d) || (hs >> rest)) throw BoardFormatError("header must be \"B D\"");
    if (b < 2 || d < 1) throw BoardFormatError("header values out of range");
    const int side = checked_side(b, d);
    if (side < 0) throw ConfigError("board side B^D exceeds " + std::to_string(kMaxSide));

    const auto n = static_cast<std::size_t>(side);
    std::vector<std::uint8_t> cells;
    cells.reserve(n * n);
    std::string line;
    for (int r = 0; r < side; ++r) {
        if (!std::getline(in, line)) throw BoardFormatError("expected " + std::to_string(side) + " rows");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != n)
            throw BoardFormatError("row " + std::to_string(r) + " has " + std::to_string(line.size()) +
                                   " cells, expected " + std::to_string(side));
        for (char ch : line) {
            if (ch != '0' && ch != '1') throw BoardFormatError("cells must be '0' or '1'");
            cells.push_back(ch == '1' ? 1 : 0);
        }
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line != "\r") throw BoardFormatError("trailing data after board rows");
    }
    return RootBoard(b, d, cells);
}

}  // namespace boardsplit
