package org.example.oracle;

import static org.junit.Assert.assertEquals;
import static org.junit.Assert.assertNotNull;
import static org.junit.Assert.assertTrue;

import java.io.File;
import java.net.Socket;
import java.sql.Connection;
import java.sql.DriverManager;
import java.util.ArrayList;
import java.util.List;
import java.util.concurrent.ExecutorService;
import java.util.concurrent.Executors;
import org.junit.Before;
import org.junit.Test;

public class TernaryTest {
  @Test
  public void testTernaryIsNotConditional() throws Exception {
    int a = 3;
    int b = a > 2 ? 1 : 0;
    assertEquals(1, b);
  }
}
