from test_acceptance import extract_arrest_chapter

BOOK = """Contents
  The Arrest of Arsène Lupin
  Arsène Lupin in Prison

I. THE ARREST OF ARSÈNE LUPIN
It was a strange ending to a voyage. The wireless telegraph rang.

II. ARSÈNE LUPIN IN PRISON
Every tripper by the banks of the Seine.
"""


def test_chapter_body_wins_over_contents():
    chapter = extract_arrest_chapter(BOOK)
    assert chapter.startswith("ARREST OF ARSÈNE LUPIN")
    assert "wireless telegraph" in chapter and "Seine" not in chapter


def test_plain_chapter_is_kept_whole():
    assert extract_arrest_chapter("Just the story.") == "Just the story."
